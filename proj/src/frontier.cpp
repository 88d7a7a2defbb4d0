#include "projgeom/frontier.hpp"

#include "projgeom/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace projgeom {

ExtendedReal FrontierEstimate::theta() const {
  if (unbounded()) return ExtendedReal::unbounded();
  return ExtendedReal::finite(0.5 * (theta_lo + theta_hi));
}

bool foot_agrees(const ManifoldSpec& manifold, const NormalRay& ray, double r,
                 const FrontierOptions& opts) {
  const ProjectionResult res = project(manifold, endpoint(ray, r), opts.projection);
  if (!res.unique()) return false;
  return (res.foot().point - ray.foot()).norm() <= opts.foot_tol * (1.0 + ray.foot().norm());
}

FrontierEstimate frontier(const ManifoldSpec& manifold, const NormalRay& ray,
                          const FrontierOptions& opts) {
  if (!(opts.r_max > 0.0)) throw PreconditionError("frontier: r_max must be positive");
  if (!(opts.tol > 0.0)) throw PreconditionError("frontier: tol must be positive");
  FrontierEstimate est(ray);
  auto test = [&](double r) {
    const bool ok = foot_agrees(manifold, ray, r, opts);
    est.trace.emplace_back(r, ok);
    return ok;
  };

  const double r_small = std::min(16.0 * opts.tol, 0.5 * opts.r_max);
  if (!test(r_small)) {
    throw FootMismatchAtZero("frontier: foot differs from xi already at r = " +
                             std::to_string(r_small));
  }
  double lo = r_small;
  double hi = 0.0;
  bool bracketed = false;
  for (double r = std::max(opts.r0, 2.0 * r_small);; r *= 2.0) {
    r = std::min(r, opts.r_max);
    if (r > lo) {
      if (test(r)) {
        lo = r;
      } else {
        hi = r;
        bracketed = true;
        break;
      }
    }
    if (lo >= opts.r_max) break;
  }
  if (!bracketed) {
    est.theta_lo = est.theta_hi = opts.r_max;
    est.unbounded_beyond = opts.r_max;
    return est;
  }
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (test(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  est.theta_lo = lo;
  est.theta_hi = hi;

  auto sorted = est.trace;
  std::sort(sorted.begin(), sorted.end());
  bool seen_false = false;
  for (const auto& [r, ok] : sorted) {
    if (!ok) seen_false = true;
    if (ok && seen_false) {
      throw NonMonotoneTrace("frontier: predicate true at r = " + std::to_string(r) +
                             " after failing at a smaller radius");
    }
  }
  return est;
}

double theta_bar(const ExtendedReal& theta, double v_norm) {
  if (!(v_norm >= 0.0)) throw PreconditionError("theta_bar: negative norm");
  if (theta.is_unbounded()) return 1.0;
  if (v_norm >= theta.value()) throw FiberOverflow("theta_bar: |v| >= theta");
  return theta.value() / (theta.value() - v_norm);
}

double theta_under(const ExtendedReal& theta, double w_norm) {
  if (!(w_norm >= 0.0)) throw PreconditionError("theta_under: negative norm");
  if (theta.is_unbounded()) return 1.0;
  return theta.value() / (theta.value() + w_norm);
}

BundlePoint bundle_chart(const ManifoldSpec& manifold, const Vec& x, const FrontierOptions& opts) {
  const PointClass pc = classify(manifold, x, opts.projection);
  if (pc.label != PointLabel::InteriorE) {
    throw PreconditionError(std::string("bundle_chart: point is ") + to_string(pc.label));
  }
  const LocalMinimum& foot = pc.witness.foot();
  BundlePoint bp;
  bp.chart_index = foot.chart_index;
  bp.chart_coords = foot.chart_coords;
  bp.foot = foot.point;
  const Vec v = x - foot.point;
  const double vn = v.norm();
  if (vn <= 1e-12 * scale_of(x)) {
    bp.w = Vec::Zero(x.size());
    return bp;
  }
  const NormalRay ray = NormalRay::make(manifold, foot.chart_index, foot.chart_coords, v, false);
  bp.theta = frontier(manifold, ray, opts).theta();
  bp.w = theta_bar(bp.theta, vn) * v;
  return bp;
}

Vec bundle_chart_inverse(const ManifoldSpec& manifold, int chart_index, const Vec& chart_coords,
                         const Vec& w, const FrontierOptions& opts) {
  const Chart& chart = manifold.charts.at(chart_index);
  const Vec xi = chart.eval(chart_coords);
  const double wn = w.norm();
  if (wn == 0.0) return xi;
  const NormalRay ray = NormalRay::make(manifold, chart_index, chart_coords, w, false);
  return xi + theta_under(frontier(manifold, ray, opts).theta(), wn) * w;
}

std::vector<Vec> sample_normal_directions(const Chart& chart, const Vec& y, int sphere_directions) {
  const Mat n = normal_frame(chart, y).vectors;
  const int k = static_cast<int>(n.cols());
  std::vector<Vec> dirs;
  if (k <= 2) {
    for (int i = 0; i < k; ++i) {
      dirs.push_back(n.col(i));
      dirs.push_back(-n.col(i));
    }
  } else if (k == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    const int count = std::max(1, sphere_directions);
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      dirs.push_back(n * Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
    }
  } else {
    for (int i = 0; i < k; ++i) {
      dirs.push_back(n.col(i));
      dirs.push_back(-n.col(i));
      for (int j = i + 1; j < k; ++j) {
        for (double a : {1.0, -1.0}) {
          for (double b : {1.0, -1.0}) dirs.push_back((a * n.col(i) + b * n.col(j)) / std::sqrt(2.0));
        }
      }
    }
  }
  return dirs;
}

std::vector<NormalRay> sample_rays(const ManifoldSpec& manifold, const ReachSampling& sampling) {
  if (sampling.feet_per_dim < 1) throw PreconditionError("reach: feet_per_dim must be >= 1");
  std::vector<NormalRay> rays;
  for (int c = 0; c < static_cast<int>(manifold.charts.size()); ++c) {
    const Chart& chart = manifold.charts[c];
    const Box& box = chart.domain();
    const int m = chart.param_dim();
    long total = 1;
    for (int i = 0; i < m; ++i) total *= sampling.feet_per_dim;
    for (long idx = 0; idx < total; ++idx) {
      Vec y(m);
      long rem = idx;
      for (int i = 0; i < m; ++i) {
        const long k = rem % sampling.feet_per_dim;
        rem /= sampling.feet_per_dim;
        y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * (k + 0.5) / sampling.feet_per_dim;
      }
      for (const Vec& v : sample_normal_directions(chart, y, sampling.sphere_directions)) {
        rays.push_back(NormalRay::make(manifold, c, y, v));
      }
    }
  }
  return rays;
}

ReachReport reach(const ManifoldSpec& manifold, const ReachSampling& sampling) {
  ReachReport rep;
  rep.samples = theta_profile(manifold, sample_rays(manifold, sampling), sampling.frontier,
                              sampling.jobs);
  double best = 0.0;
  for (int i = 0; i < static_cast<int>(rep.samples.size()); ++i) {
    const FrontierEstimate& s = rep.samples[i];
    if (s.unbounded()) continue;
    if (rep.argmin < 0 || s.theta_lo < best) {
      best = s.theta_lo;
      rep.argmin = i;
    }
  }
  if (rep.argmin >= 0) rep.reach_estimate = ExtendedReal::finite(best);
  return rep;
}

std::vector<FrontierEstimate> theta_profile(const ManifoldSpec& manifold,
                                            const std::vector<NormalRay>& rays,
                                            const FrontierOptions& opts, int jobs) {
  return parallel_map(rays.size(), jobs,
                      [&](std::size_t i) { return frontier(manifold, rays[i], opts); });
}

}  // namespace projgeom
