#pragma once

#include "projgeom/manifold.hpp"

#include <vector>

namespace projgeom {

struct ShapeOperatorReport {
  explicit ShapeOperatorReport(NormalRay r) : ray(std::move(r)) {}

  NormalRay ray;
  /// m x m, symmetric, in the orthonormal tangent frame `frame`.
  Mat matrix;
  /// d x m orthonormal tangent frame D psi G^(-1/2).
  Mat frame;
  Vec eigenvalues;   // descending
  Mat eigenvectors;  // columns, frame coordinates
  ExtendedReal rho = ExtendedReal::unbounded();
  /// xi + v / lambda for every positive eigenvalue, in eigenvalue order.
  std::vector<Vec> centers;
  /// max |B - B^T| of the raw second fundamental form before symmetrization.
  double asymmetry = 0.0;
};

/// G^(-1/2) B G^(-1/2) with B_ij = <d^2 psi / dy_i dy_j, v>, G = D psi^T D psi.
/// Throws NotC2 if the chart has no second derivatives, RankDeficient if
/// D psi is singular at the foot.
ShapeOperatorReport shape_operator(const ManifoldSpec& manifold, const NormalRay& ray);

/// -E^T Dn E from central differences of the unit normal field
/// n(y) = normalize(v - P_T(y) v) along the orthonormal frame directions E.
Mat shape_operator_fd_oracle(const ManifoldSpec& manifold, const NormalRay& ray,
                             double step = 1e-4);

/// 1 / max(0, lambda_max), unbounded when no eigenvalue is positive.
ExtendedReal radius_of_curvature(const ManifoldSpec& manifold, const NormalRay& ray);

enum class EndpointStatus { Singular, Regular };

/// Singular iff 1/r equals a positive eigenvalue within 1e-6 relative, i.e.
/// xi + r v is a center of curvature.
EndpointStatus endpoint_singularity_check(const ManifoldSpec& manifold, const NormalRay& ray,
                                          double r);

}  // namespace projgeom
