#pragma once

#include "projgeom/common.hpp"

#include <functional>
#include <string>
#include <vector>

namespace projgeom {

/// Closed axis-aligned parameter box. A face flagged as truncated is an
/// artificial cut: the truncation of a non-compact manifold, or a chart seam
/// of a closed one. An untruncated face is a genuine boundary of the
/// represented set (e.g. the endpoint of the half-parabola).
struct Box {
  Vec lo;
  Vec hi;
  std::vector<bool> truncated_lo;
  std::vector<bool> truncated_hi;

  Box() = default;
  Box(Vec lo_, Vec hi_, bool truncated = false);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& y) const;
  Vec clamp(const Vec& y) const;
  Vec center() const { return 0.5 * (lo + hi); }
  Vec width() const { return hi - lo; }
};

enum class DerivativeMode { Analytic, FiniteDifference };

/// Value, Jacobian (d x m) and per-coordinate Hessians (d matrices, m x m).
struct ChartJet {
  Vec value;
  Mat jacobian;
  std::vector<Mat> hessians;
};

/// Local parametrization psi of a piece of the manifold over a closed box.
class Chart {
 public:
  /// Fills `out` up to derivative order 0, 1 or 2.
  using JetFn = std::function<void(const Vec& y, int order, ChartJet& out)>;
  using ValueFn = std::function<Vec(const Vec& y)>;
  using JacobianFn = std::function<Mat(const Vec& y)>;

  static Chart analytic(int param_dim, int ambient_dim, Box domain, JetFn jet);

  /// Derivatives missing from the inputs are produced by central differences
  /// with steps eps^(1/3) (first order) and eps^(1/4) (second order), scaled
  /// by max(1, |y_i|). Stencils never leave the box.
  static Chart finite_difference(int param_dim, int ambient_dim, Box domain, ValueFn value,
                                 JacobianFn jacobian = {});

  /// A 0-dimensional chart: a single point.
  static Chart point(const Vec& p);

  int param_dim() const { return m_; }
  int ambient_dim() const { return d_; }
  const Box& domain() const { return domain_; }
  DerivativeMode derivative_mode() const { return mode_; }

  /// Second derivatives may be declared unavailable (NotC2 for curvature).
  bool has_hessian() const { return has_hessian_; }
  void disable_hessian() { has_hessian_ = false; }

  /// Same map over a sub-box (throws PreconditionError if not contained).
  Chart with_domain(Box sub) const;

  Vec eval(const Vec& y) const;
  Mat jacobian(const Vec& y) const;
  std::vector<Mat> hessian(const Vec& y) const;

  /// Throws DomainError if y is outside the box.
  void jet(const Vec& y, int order, ChartJet& out) const;

 private:
  Chart() = default;
  void check_domain(const Vec& y) const;

  int m_ = 0;
  int d_ = 0;
  Box domain_;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  bool has_hessian_ = true;
  JetFn jet_;
};

struct ManifoldSpec {
  std::string name;
  std::vector<Chart> charts;
  int smoothness_claim = 2;

  ManifoldSpec() = default;
  ManifoldSpec(std::string name_, std::vector<Chart> charts_, int smoothness = 2);

  int param_dim() const { return charts.front().param_dim(); }
  int ambient_dim() const { return charts.front().ambient_dim(); }
  int codim() const { return ambient_dim() - param_dim(); }
};

struct TangentFrame {
  Vec base_point;
  Mat vectors;  // d x m, orthonormal columns
};

struct NormalFrame {
  Vec base_point;
  Mat vectors;  // d x (d - m), orthonormal columns
};

/// Gram-Schmidt of the columns of D psi(y) in coordinate order.
/// Throws RankDeficient when sigma_min < 1e-10 sigma_max.
TangentFrame tangent_frame(const Chart& chart, const Vec& y);

/// Completes the tangent frame with canonical basis vectors e_1, e_2, ... in
/// index order, skipping candidates whose residual norm is below 1e-6.
NormalFrame normal_frame(const Chart& chart, const Vec& y);

/// Unit normal vector at a point of the manifold, located by chart coordinates.
class NormalRay {
 public:
  /// Normalizes `direction`; throws PreconditionError if it is zero or not
  /// orthogonal to the tangent space (|<v,t>| > 1e-8 after normalization).
  /// `require_normal = false` admits directions in the wider normal cone at a
  /// genuine chart boundary (e.g. beyond the end of a curve).
  static NormalRay make(const ManifoldSpec& manifold, int chart_index, const Vec& chart_coords,
                        const Vec& direction, bool require_normal = true);

  const Vec& foot() const { return foot_; }
  const Vec& direction() const { return direction_; }
  int chart_index() const { return chart_index_; }
  const Vec& chart_coords() const { return coords_; }

  NormalRay flipped() const;

 private:
  NormalRay() = default;
  Vec foot_;
  Vec direction_;
  int chart_index_ = 0;
  Vec coords_;
};

/// foot + r * direction.
Vec endpoint(const NormalRay& ray, double r);

struct SubspaceDistance {
  double chord;        // sup-inf distance of unit spheres, 2 sin(theta_max / 2)
  double max_angle;    // largest principal angle
  double arcsin_form;  // 2 asin(theta_max / 2), alternative convention
};

/// Hausdorff distance of the unit spheres of two equal-dimensional subspaces,
/// given by orthonormal bases (columns).
SubspaceDistance subspace_distance_report(const Mat& basis1, const Mat& basis2);
double subspace_distance(const Mat& basis1, const Mat& basis2);

}  // namespace projgeom
