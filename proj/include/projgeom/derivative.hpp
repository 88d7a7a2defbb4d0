#pragma once

#include "projgeom/manifold.hpp"
#include "projgeom/projection.hpp"

namespace projgeom {

class SingularResolvent : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A finite-difference probe landed in a different basin of the projection.
class FootJump : public SolverError {
 public:
  using SolverError::SolverError;
};

class BoundViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

struct DpReport {
  Vec x;
  Vec foot;
  Mat formula_matrix;
  Mat fd_matrix;
  /// |formula - fd|_F / (1 + |fd|_F).
  double rel_error = 0.0;
  /// (1 - |x - xi| / eps0)^(-1) when eps0 was supplied and |x - xi| < eps0.
  ExtendedReal norm_bound = ExtendedReal::unbounded();
};

/// E (I - |x - xi| L)^(-1) E^T with E an orthonormal tangent frame at the foot
/// and L the shape operator along (x - xi) / |x - xi|; P_T when x lies on M.
/// Throws PreconditionError if the foot is not unique or x - xi is not normal,
/// SingularResolvent if I - |x - xi| L is singular within 1e-10.
Mat dp_formula(const ManifoldSpec& manifold, const Vec& x, const ProjectionOptions& opts = {});

/// Central differences of project(x) with step h (default 1e-5 (1 + |x|)).
/// Throws FootJump if a probe foot moves more than max(0.1 |x - xi|, 10 h).
Mat dp_fd(const ManifoldSpec& manifold, const Vec& x, double h = 0.0,
          const ProjectionOptions& opts = {});

/// 2 (x - p(x)).
Vec grad_delta_squared(const ManifoldSpec& manifold, const Vec& x,
                       const ProjectionOptions& opts = {});

/// (1 - |x - xi| / eps0)^(-1); throws BoundViolation if the operator norm of
/// dp_formula exceeds it by more than 1e-8, PreconditionError if |x - xi| >= eps0.
double dp_norm_bound(const ManifoldSpec& manifold, const Vec& x, double eps0,
                     const ProjectionOptions& opts = {});

/// Both matrices, their relative error, and the bound if eps0 > 0.
DpReport dp_check(const ManifoldSpec& manifold, const Vec& x, double eps0 = 0.0,
                  const ProjectionOptions& opts = {});

}  // namespace projgeom
