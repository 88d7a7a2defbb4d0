#pragma once

#include "projgeom/manifold.hpp"
#include "projgeom/projection.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace projgeom {

class FootMismatchAtZero : public SolverError {
 public:
  using SolverError::SolverError;
};

class FiberOverflow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The frontier predicate along a ray was not monotone (solver noise).
class NonMonotoneTrace : public SolverError {
 public:
  using SolverError::SolverError;
};

struct FrontierOptions {
  double r_max = 4.0;
  double tol = 1e-5;
  double r0 = 1e-3;
  /// Foot must stay within foot_tol * (1 + |xi|) of xi.
  double foot_tol = 1e-6;
  ProjectionOptions projection;
};

struct FrontierEstimate {
  explicit FrontierEstimate(NormalRay r) : ray(std::move(r)) {}

  NormalRay ray;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  /// Set when the predicate still held at r_max: theta lies in [r_max, inf).
  std::optional<double> unbounded_beyond;
  /// (r, foot agrees) in evaluation order.
  std::vector<std::pair<double, bool>> trace;

  bool unbounded() const { return unbounded_beyond.has_value(); }
  /// Bracket midpoint, or unbounded.
  ExtendedReal theta() const;
};

/// True when x = xi + r v projects uniquely back to xi.
bool foot_agrees(const ManifoldSpec& manifold, const NormalRay& ray, double r,
                 const FrontierOptions& opts);

/// Doubling from r0 until the predicate fails (or r_max), then bisection to tol.
FrontierEstimate frontier(const ManifoldSpec& manifold, const NormalRay& ray,
                          const FrontierOptions& opts = {});

/// theta / (theta - |v|), or 1 for unbounded theta. FiberOverflow if |v| >= theta.
double theta_bar(const ExtendedReal& theta, double v_norm);
/// theta / (theta + |w|), or 1 for unbounded theta.
double theta_under(const ExtendedReal& theta, double w_norm);

struct BundlePoint {
  int chart_index = 0;
  Vec chart_coords;
  Vec foot;
  /// Scaled normal theta_bar * (x - xi); zero when x lies on M.
  Vec w;
  ExtendedReal theta = ExtendedReal::unbounded();
};

/// (xi, theta_bar (x - xi)) for x in the open domain of the projection.
/// Throws PreconditionError unless classify(x) is InteriorE.
BundlePoint bundle_chart(const ManifoldSpec& manifold, const Vec& x,
                         const FrontierOptions& opts = {});

/// xi + theta_under w, with theta evaluated on the ray through w.
Vec bundle_chart_inverse(const ManifoldSpec& manifold, int chart_index, const Vec& chart_coords,
                         const Vec& w, const FrontierOptions& opts = {});

struct ReachSampling {
  /// Cell-centred feet per parameter axis and chart.
  int feet_per_dim = 16;
  /// Direction count for codimension >= 3 (Fibonacci sphere in codim 3).
  int sphere_directions = 32;
  FrontierOptions frontier;
  int jobs = 1;
};

struct ReachReport {
  std::vector<FrontierEstimate> samples;
  /// Minimum theta_lo over bounded samples; unbounded if every sample is.
  ExtendedReal reach_estimate = ExtendedReal::unbounded();
  int argmin = -1;
};

/// Unit normal directions sampled at a foot.
std::vector<Vec> sample_normal_directions(const Chart& chart, const Vec& y, int sphere_directions);

std::vector<NormalRay> sample_rays(const ManifoldSpec& manifold, const ReachSampling& sampling);

ReachReport reach(const ManifoldSpec& manifold, const ReachSampling& sampling = {});

/// Frontier estimates for a family of rays, in order.
std::vector<FrontierEstimate> theta_profile(const ManifoldSpec& manifold,
                                            const std::vector<NormalRay>& rays,
                                            const FrontierOptions& opts = {}, int jobs = 1);

}  // namespace projgeom
