#include "projgeom/derivative.hpp"

#include "projgeom/curvature.hpp"

#include <cmath>

namespace projgeom {

namespace {

const LocalMinimum& unique_foot(const ProjectionResult& r, const char* who) {
  if (!r.unique()) {
    throw PreconditionError(std::string(who) + ": projection is not unique (" +
                            to_string(r.multiplicity) + ")");
  }
  return r.foot();
}

}  // namespace

Mat dp_formula(const ManifoldSpec& manifold, const Vec& x, const ProjectionOptions& opts) {
  const ProjectionResult res = project(manifold, x, opts);
  const LocalMinimum& foot = unique_foot(res, "dp_formula");
  const Chart& chart = manifold.charts[foot.chart_index];
  const Vec v = x - foot.point;
  const double dist = v.norm();
  const TangentFrame tf = tangent_frame(chart, foot.chart_coords);
  if (dist <= 1e-14 * scale_of(x)) return tf.vectors * tf.vectors.transpose();

  const Vec unit = v / dist;
  if (tf.vectors.cols() > 0 && (tf.vectors.transpose() * unit).cwiseAbs().maxCoeff() > 1e-6) {
    throw PreconditionError("dp_formula: x - p(x) is not normal (foot on a chart boundary)");
  }
  // Tangential residue of the solver is removed before building the ray.
  const Vec normal = unit - tf.vectors * (tf.vectors.transpose() * unit);
  const NormalRay ray = NormalRay::make(manifold, foot.chart_index, foot.chart_coords, normal);
  const ShapeOperatorReport so = shape_operator(manifold, ray);
  const int m = chart.param_dim();
  const Mat a = Mat::Identity(m, m) - dist * so.matrix;
  Eigen::SelfAdjointEigenSolver<Mat> eig(a);
  if (m > 0 && eig.eigenvalues().cwiseAbs().minCoeff() <= 1e-10) {
    throw SingularResolvent("dp_formula: x is at a center of curvature");
  }
  const Mat inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                  eig.eigenvectors().transpose();
  return so.frame * inv * so.frame.transpose();
}

Mat dp_fd(const ManifoldSpec& manifold, const Vec& x, double h, const ProjectionOptions& opts) {
  if (h <= 0.0) h = 1e-5 * scale_of(x);
  const ProjectionResult base = project(manifold, x, opts);
  const LocalMinimum& foot = unique_foot(base, "dp_fd");
  const double limit = std::max(0.1 * (x - foot.point).norm(), 10.0 * h);
  const int d = static_cast<int>(x.size());
  Mat out(d, d);
  for (int j = 0; j < d; ++j) {
    Vec feet[2];
    for (int s = 0; s < 2; ++s) {
      const Vec probe = x + (s == 0 ? h : -h) * Vec::Unit(d, j);
      const ProjectionResult r = project(manifold, probe, opts);
      if (!r.unique()) throw FootJump("dp_fd: probe projection is not unique");
      if ((r.foot().point - foot.point).norm() > limit) {
        throw FootJump("dp_fd: probe foot jumped to another basin");
      }
      feet[s] = r.foot().point;
    }
    out.col(j) = (feet[0] - feet[1]) / (2.0 * h);
  }
  return out;
}

Vec grad_delta_squared(const ManifoldSpec& manifold, const Vec& x, const ProjectionOptions& opts) {
  const ProjectionResult res = project(manifold, x, opts);
  return 2.0 * (x - unique_foot(res, "grad_delta_squared").point);
}

double dp_norm_bound(const ManifoldSpec& manifold, const Vec& x, double eps0,
                     const ProjectionOptions& opts) {
  if (!(eps0 > 0.0)) throw PreconditionError("dp_norm_bound: eps0 must be positive");
  const ProjectionResult res = project(manifold, x, opts);
  const double dist = (x - unique_foot(res, "dp_norm_bound").point).norm();
  if (dist >= eps0) throw PreconditionError("dp_norm_bound: |x - p(x)| >= eps0");
  const double bound = 1.0 / (1.0 - dist / eps0);
  const Mat dp = dp_formula(manifold, x, opts);
  const double op_norm = Eigen::JacobiSVD<Mat>(dp).singularValues()[0];
  if (op_norm > bound + 1e-8) {
    throw BoundViolation("dp_norm_bound: |Dp| = " + std::to_string(op_norm) + " exceeds " +
                         std::to_string(bound));
  }
  return bound;
}

DpReport dp_check(const ManifoldSpec& manifold, const Vec& x, double eps0,
                  const ProjectionOptions& opts) {
  DpReport rep;
  rep.x = x;
  rep.foot = unique_foot(project(manifold, x, opts), "dp_check").point;
  rep.formula_matrix = dp_formula(manifold, x, opts);
  rep.fd_matrix = dp_fd(manifold, x, 0.0, opts);
  rep.rel_error = (rep.formula_matrix - rep.fd_matrix).norm() / (1.0 + rep.fd_matrix.norm());
  if (eps0 > 0.0) rep.norm_bound = ExtendedReal::finite(dp_norm_bound(manifold, x, eps0, opts));
  return rep;
}

}  // namespace projgeom
