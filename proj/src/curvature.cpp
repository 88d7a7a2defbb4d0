#include "projgeom/curvature.hpp"

#include <cmath>

namespace projgeom {

namespace {

// G^(-1/2) by symmetric eigendecomposition with eigenvalue floor.
Mat inverse_sqrt(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  const Vec ev = eig.eigenvalues().cwiseMax(1e-12);
  return eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

void check_rank(const Mat& jac) {
  const int m = static_cast<int>(jac.cols());
  if (m == 0) return;
  const Vec s = Eigen::JacobiSVD<Mat>(jac).singularValues();
  if (!(s[0] > 0.0) || !(s[m - 1] >= 1e-10 * s[0])) {
    throw RankDeficient("shape_operator: D psi is rank deficient at the foot");
  }
}

// Unit normal field at chart coordinates y, continuing v.
Vec normal_field(const Chart& chart, const Vec& y, const Vec& v) {
  const Mat q = tangent_frame(chart, y).vectors;
  const Vec n = v - q * (q.transpose() * v);
  return n / n.norm();
}

}  // namespace

ShapeOperatorReport shape_operator(const ManifoldSpec& manifold, const NormalRay& ray) {
  const Chart& chart = manifold.charts.at(ray.chart_index());
  if (!chart.has_hessian()) throw NotC2("shape_operator: chart has no second derivatives");
  ShapeOperatorReport rep(ray);
  const int m = chart.param_dim();
  ChartJet jet;
  chart.jet(ray.chart_coords(), 2, jet);
  check_rank(jet.jacobian);

  const Vec& v = ray.direction();
  Mat b = Mat::Zero(m, m);
  for (int k = 0; k < chart.ambient_dim(); ++k) b += v[k] * jet.hessians[k];
  rep.asymmetry = m > 0 ? (b - b.transpose()).cwiseAbs().maxCoeff() : 0.0;
  b = 0.5 * (b + b.transpose()).eval();

  const Mat gis = inverse_sqrt(jet.jacobian.transpose() * jet.jacobian);
  rep.frame = jet.jacobian * gis;
  rep.matrix = gis * b * gis;
  rep.matrix = 0.5 * (rep.matrix + rep.matrix.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> eig(rep.matrix);
  rep.eigenvalues = eig.eigenvalues().reverse();
  rep.eigenvectors = eig.eigenvectors().rowwise().reverse();
  if (m > 0 && rep.eigenvalues[0] > 0.0) rep.rho = ExtendedReal::finite(1.0 / rep.eigenvalues[0]);
  for (int i = 0; i < m; ++i) {
    if (rep.eigenvalues[i] > 0.0) rep.centers.push_back(ray.foot() + v / rep.eigenvalues[i]);
  }
  return rep;
}

Mat shape_operator_fd_oracle(const ManifoldSpec& manifold, const NormalRay& ray, double step) {
  const Chart& chart = manifold.charts.at(ray.chart_index());
  const int m = chart.param_dim();
  const Vec& y0 = ray.chart_coords();
  const Vec& v = ray.direction();
  const Mat jac = chart.jacobian(y0);
  check_rank(jac);
  const Mat gis = inverse_sqrt(jac.transpose() * jac);
  const Mat frame = jac * gis;
  const Box& box = chart.domain();

  Mat dn(chart.ambient_dim(), m);
  for (int j = 0; j < m; ++j) {
    // Parameter direction whose image velocity is the j-th frame vector.
    const Vec c = gis.col(j);
    double h = step;
    auto fits = [&](double s) { return box.contains(y0 + s * c); };
    while (h > 1e-9 && !fits(h) && !fits(-h)) h *= 0.5;
    if (fits(h) && fits(-h)) {
      dn.col(j) = (normal_field(chart, y0 + h * c, v) - normal_field(chart, y0 - h * c, v)) / (2 * h);
    } else {
      // Second-order one-sided stencil pointing into the box.
      const double s = fits(2 * h) ? h : -h;
      dn.col(j) = (-3.0 * normal_field(chart, y0, v) + 4.0 * normal_field(chart, y0 + s * c, v) -
                   normal_field(chart, y0 + 2 * s * c, v)) /
                  (2 * s);
    }
  }
  return -frame.transpose() * dn;
}

ExtendedReal radius_of_curvature(const ManifoldSpec& manifold, const NormalRay& ray) {
  return shape_operator(manifold, ray).rho;
}

EndpointStatus endpoint_singularity_check(const ManifoldSpec& manifold, const NormalRay& ray,
                                          double r) {
  if (!(r > 0.0)) throw PreconditionError("endpoint_singularity_check: r must be positive");
  const ShapeOperatorReport rep = shape_operator(manifold, ray);
  for (int i = 0; i < rep.eigenvalues.size(); ++i) {
    const double lam = rep.eigenvalues[i];
    if (lam > 0.0 && std::abs(1.0 / r - lam) <= 1e-6 * lam) return EndpointStatus::Singular;
  }
  return EndpointStatus::Regular;
}

}  // namespace projgeom
