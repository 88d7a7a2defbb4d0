#include "projgeom/manifold.hpp"

#include <cmath>
#include <sstream>

namespace projgeom {

std::string ExtendedReal::to_string() const {
  if (unbounded_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

// ---------------------------------------------------------------- Box

Box::Box(Vec lo_, Vec hi_, bool truncated)
    : lo(std::move(lo_)),
      hi(std::move(hi_)),
      truncated_lo(lo.size(), truncated),
      truncated_hi(lo.size(), truncated) {
  if (lo.size() != hi.size()) throw DimensionMismatch("Box: lo/hi size mismatch");
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw ValidationError("Box: lo > hi");
  }
}

bool Box::contains(const Vec& y) const {
  if (y.size() != lo.size()) return false;
  for (int i = 0; i < y.size(); ++i) {
    const double slack = 1e-12 * (1.0 + std::abs(lo[i]) + std::abs(hi[i]));
    if (!(y[i] >= lo[i] - slack && y[i] <= hi[i] + slack)) return false;
  }
  return true;
}

Vec Box::clamp(const Vec& y) const { return y.cwiseMax(lo).cwiseMin(hi); }

// ---------------------------------------------------------------- Chart

namespace {

// One-dimensional first derivative of a vector-valued map along coordinate i.
// Central when the stencil fits in the box, otherwise second-order one-sided.
Vec fd_first(const std::function<Vec(const Vec&)>& f, const Vec& y, int i, double h,
             const Box& box) {
  Vec yp = y, ym = y;
  if (y[i] - h >= box.lo[i] && y[i] + h <= box.hi[i]) {
    yp[i] += h;
    ym[i] -= h;
    return (f(yp) - f(ym)) / (2.0 * h);
  }
  if (y[i] + 2.0 * h <= box.hi[i]) {
    Vec y2 = y;
    yp[i] += h;
    y2[i] += 2.0 * h;
    return (-3.0 * f(y) + 4.0 * f(yp) - f(y2)) / (2.0 * h);
  }
  if (y[i] - 2.0 * h >= box.lo[i]) {
    Vec y2 = y;
    ym[i] -= h;
    y2[i] -= 2.0 * h;
    return (3.0 * f(y) - 4.0 * f(ym) + f(y2)) / (2.0 * h);
  }
  // Box narrower than the stencil: plain secant over the full width.
  yp[i] = box.hi[i];
  ym[i] = box.lo[i];
  const double w = box.hi[i] - box.lo[i];
  if (w <= 0.0) return Vec::Zero(f(y).size());
  return (f(yp) - f(ym)) / w;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

}  // namespace

Chart Chart::analytic(int param_dim, int ambient_dim, Box domain, JetFn jet) {
  if (param_dim < 0 || param_dim >= ambient_dim) {
    throw ValidationError("Chart: need 0 <= m < d");
  }
  if (domain.dim() != param_dim) throw DimensionMismatch("Chart: domain dimension != m");
  Chart c;
  c.m_ = param_dim;
  c.d_ = ambient_dim;
  c.domain_ = std::move(domain);
  c.mode_ = DerivativeMode::Analytic;
  c.jet_ = std::move(jet);
  return c;
}

Chart Chart::finite_difference(int param_dim, int ambient_dim, Box domain, ValueFn value,
                               JacobianFn jacobian) {
  const int m = param_dim;
  const int d = ambient_dim;
  Box box = domain;
  auto jet = [m, d, box, value, jacobian](const Vec& y, int order, ChartJet& out) {
    out.value = value(y);
    if (order < 1) return;
    const double h1 = std::cbrt(kMachineEps);
    const double h2 = std::pow(kMachineEps, 0.25);
    if (jacobian) {
      out.jacobian = jacobian(y);
    } else {
      out.jacobian.resize(d, m);
      for (int i = 0; i < m; ++i) {
        out.jacobian.col(i) = fd_first(value, y, i, h1 * std::max(1.0, std::abs(y[i])), box);
      }
    }
    if (order < 2) return;
    out.hessians.assign(d, Mat::Zero(m, m));
    if (jacobian) {
      auto flat = [&jacobian](const Vec& z) { return flatten(jacobian(z)); };
      for (int j = 0; j < m; ++j) {
        const Vec dj = fd_first(flat, y, j, h1 * std::max(1.0, std::abs(y[j])), box);
        const Eigen::Map<const Mat> djac(dj.data(), d, m);  // d/dy_j of D psi
        for (int k = 0; k < d; ++k) out.hessians[k].col(j) = djac.row(k).transpose();
      }
      for (int k = 0; k < d; ++k) {
        out.hessians[k] = 0.5 * (out.hessians[k] + out.hessians[k].transpose()).eval();
      }
      return;
    }
    // Second differences of values, stencil centre shifted into the box.
    Vec h(m);
    Vec c = y;
    for (int i = 0; i < m; ++i) {
      h[i] = h2 * std::max(1.0, std::abs(y[i]));
      const double w = box.hi[i] - box.lo[i];
      if (w >= 2.0 * h[i]) {
        c[i] = std::clamp(y[i], box.lo[i] + h[i], box.hi[i] - h[i]);
      } else {
        h[i] = 0.5 * w;
        c[i] = box.center()[i];
      }
    }
    const Vec f0 = value(c);
    for (int i = 0; i < m; ++i) {
      if (h[i] <= 0.0) continue;
      Vec yp = c, ym = c;
      yp[i] += h[i];
      ym[i] -= h[i];
      const Vec second = (value(yp) - 2.0 * f0 + value(ym)) / (h[i] * h[i]);
      for (int k = 0; k < d; ++k) out.hessians[k](i, i) = second[k];
      for (int j = i + 1; j < m; ++j) {
        if (h[j] <= 0.0) continue;
        Vec pp = c, pm = c, mp = c, mm = c;
        pp[i] += h[i], pp[j] += h[j];
        pm[i] += h[i], pm[j] -= h[j];
        mp[i] -= h[i], mp[j] += h[j];
        mm[i] -= h[i], mm[j] -= h[j];
        const Vec mixed = (value(pp) - value(pm) - value(mp) + value(mm)) / (4.0 * h[i] * h[j]);
        for (int k = 0; k < d; ++k) {
          out.hessians[k](i, j) = mixed[k];
          out.hessians[k](j, i) = mixed[k];
        }
      }
    }
  };
  Chart c = analytic(param_dim, ambient_dim, std::move(domain), std::move(jet));
  c.mode_ = DerivativeMode::FiniteDifference;
  return c;
}

Chart Chart::point(const Vec& p) {
  const int d = static_cast<int>(p.size());
  return analytic(0, d, Box(Vec(0), Vec(0)), [p, d](const Vec&, int order, ChartJet& out) {
    out.value = p;
    if (order >= 1) out.jacobian.resize(d, 0);
    if (order >= 2) out.hessians.assign(d, Mat(0, 0));
  });
}

Chart Chart::with_domain(Box sub) const {
  if (sub.dim() != m_) throw DimensionMismatch("Chart::with_domain: dimension");
  if (!domain_.contains(sub.lo) || !domain_.contains(sub.hi)) {
    throw PreconditionError("Chart::with_domain: box not contained in the chart domain");
  }
  Chart c = *this;
  c.domain_ = std::move(sub);
  return c;
}

void Chart::check_domain(const Vec& y) const {
  if (y.size() != m_) throw DimensionMismatch("Chart: parameter dimension mismatch");
  if (!domain_.contains(y)) throw DomainError("Chart: evaluation outside the parameter box");
}

void Chart::jet(const Vec& y, int order, ChartJet& out) const {
  check_domain(y);
  jet_(y, order, out);
}

Vec Chart::eval(const Vec& y) const {
  ChartJet j;
  jet(y, 0, j);
  return j.value;
}

Mat Chart::jacobian(const Vec& y) const {
  ChartJet j;
  jet(y, 1, j);
  return j.jacobian;
}

std::vector<Mat> Chart::hessian(const Vec& y) const {
  if (!has_hessian_) throw NotC2("Chart: second derivatives unavailable");
  ChartJet j;
  jet(y, 2, j);
  return j.hessians;
}

// ---------------------------------------------------------------- ManifoldSpec

ManifoldSpec::ManifoldSpec(std::string name_, std::vector<Chart> charts_, int smoothness)
    : name(std::move(name_)), charts(std::move(charts_)), smoothness_claim(smoothness) {
  if (charts.empty()) throw ValidationError("ManifoldSpec: no charts");
  for (const Chart& c : charts) {
    if (c.param_dim() != charts.front().param_dim() ||
        c.ambient_dim() != charts.front().ambient_dim()) {
      throw DimensionMismatch("ManifoldSpec: charts disagree on (m, d)");
    }
  }
  if (smoothness_claim < 1) throw ValidationError("ManifoldSpec: smoothness claim must be >= 1");
}

// ---------------------------------------------------------------- frames

TangentFrame tangent_frame(const Chart& chart, const Vec& y) {
  ChartJet j;
  chart.jet(y, 1, j);
  const int m = chart.param_dim();
  TangentFrame frame{j.value, Mat(chart.ambient_dim(), m)};
  if (m == 0) return frame;

  Eigen::JacobiSVD<Mat> svd(j.jacobian);
  const Vec& s = svd.singularValues();
  if (!(s[m - 1] >= 1e-10 * s[0]) || s[0] == 0.0) {
    throw RankDeficient("tangent_frame: D psi is rank deficient");
  }
  // Modified Gram-Schmidt with one reorthogonalization pass.
  for (int i = 0; i < m; ++i) {
    Vec v = j.jacobian.col(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < i; ++k) v -= frame.vectors.col(k).dot(v) * frame.vectors.col(k);
    }
    frame.vectors.col(i) = v / v.norm();
  }
  return frame;
}

NormalFrame normal_frame(const Chart& chart, const Vec& y) {
  const TangentFrame tf = tangent_frame(chart, y);
  const int d = chart.ambient_dim();
  const int m = chart.param_dim();
  Mat basis(d, d);
  basis.leftCols(m) = tf.vectors;
  int filled = m;
  for (int k = 0; k < d && filled < d; ++k) {
    Vec v = Vec::Unit(d, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < filled; ++c) v -= basis.col(c).dot(v) * basis.col(c);
    }
    const double n = v.norm();
    if (n < 1e-6) continue;
    basis.col(filled++) = v / n;
  }
  return NormalFrame{tf.base_point, basis.rightCols(d - m)};
}

// ---------------------------------------------------------------- NormalRay

NormalRay NormalRay::make(const ManifoldSpec& manifold, int chart_index, const Vec& chart_coords,
                          const Vec& direction, bool require_normal) {
  if (chart_index < 0 || chart_index >= static_cast<int>(manifold.charts.size())) {
    throw PreconditionError("NormalRay: chart index out of range");
  }
  const Chart& chart = manifold.charts[chart_index];
  if (direction.size() != chart.ambient_dim()) {
    throw DimensionMismatch("NormalRay: direction has wrong dimension");
  }
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw PreconditionError("NormalRay: zero direction");
  const TangentFrame tf = tangent_frame(chart, chart_coords);
  NormalRay ray;
  ray.direction_ = direction / n;
  for (int i = 0; require_normal && i < tf.vectors.cols(); ++i) {
    if (std::abs(tf.vectors.col(i).dot(ray.direction_)) > 1e-8) {
      throw PreconditionError("NormalRay: direction is not normal to the tangent space");
    }
  }
  ray.foot_ = tf.base_point;
  ray.chart_index_ = chart_index;
  ray.coords_ = chart_coords;
  return ray;
}

NormalRay NormalRay::flipped() const {
  NormalRay r = *this;
  r.direction_ = -direction_;
  return r;
}

Vec endpoint(const NormalRay& ray, double r) {
  if (!(r >= 0.0)) throw PreconditionError("endpoint: r must be nonnegative");
  return ray.foot() + r * ray.direction();
}

// ---------------------------------------------------------------- subspace distance

SubspaceDistance subspace_distance_report(const Mat& basis1, const Mat& basis2) {
  if (basis1.rows() != basis2.rows() || basis1.cols() != basis2.cols()) {
    throw DimensionMismatch("subspace_distance: subspaces differ in dimension");
  }
  if (basis1.cols() == 0) return {0.0, 0.0, 0.0};
  // cos(theta_max) = sigma_min(Q1^T Q2); sin(theta_max) = sigma_max((I - Q2 Q2^T) Q1).
  const Mat cross = basis1.transpose() * basis2;
  const Mat resid = basis1 - basis2 * (basis2.transpose() * basis1);
  const double c = Eigen::JacobiSVD<Mat>(cross).singularValues().minCoeff();
  const double s = Eigen::JacobiSVD<Mat>(resid).singularValues().maxCoeff();
  const double theta = std::atan2(s, c);
  return {2.0 * std::sin(0.5 * theta), theta, 2.0 * std::asin(0.5 * theta)};
}

double subspace_distance(const Mat& basis1, const Mat& basis2) {
  return subspace_distance_report(basis1, basis2).chord;
}

}  // namespace projgeom
