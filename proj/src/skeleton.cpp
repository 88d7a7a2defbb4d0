#include "projgeom/skeleton.hpp"

#include "projgeom/frontier.hpp"
#include "projgeom/manifold.hpp"
#include "projgeom/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace projgeom {

GridRegion::GridRegion(Vec lo_, Vec hi_, int per_axis)
    : lo(std::move(lo_)), hi(std::move(hi_)), n(lo.size(), per_axis) {
  if (lo.size() != hi.size()) throw DimensionMismatch("GridRegion: lo/hi size");
  if (per_axis < 2) throw PreconditionError("GridRegion: need at least 2 points per axis");
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw PreconditionError("GridRegion: need lo < hi");
  }
}

long GridRegion::size() const {
  long s = 1;
  for (int k : n) s *= k;
  return s;
}

Vec GridRegion::spacing() const {
  Vec s(dim());
  for (int i = 0; i < dim(); ++i) s[i] = (hi[i] - lo[i]) / (n[i] - 1);
  return s;
}

std::vector<int> GridRegion::index(long flat) const {
  std::vector<int> idx(dim());
  for (int i = 0; i < dim(); ++i) {
    idx[i] = static_cast<int>(flat % n[i]);
    flat /= n[i];
  }
  return idx;
}

long GridRegion::flat(const std::vector<int>& idx) const {
  long f = 0;
  for (int i = dim() - 1; i >= 0; --i) f = f * n[i] + idx[i];
  return f;
}

Vec GridRegion::point(long flat_index) const {
  const std::vector<int> idx = index(flat_index);
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) {
    x[i] = idx[i] == n[i] - 1 ? hi[i] : lo[i] + (hi[i] - lo[i]) * idx[i] / (n[i] - 1);
  }
  return x;
}

GridSweep sweep_grid(const ManifoldSpec& manifold, const GridRegion& region,
                     const ProjectionOptions& opts, int jobs) {
  if (region.dim() != manifold.ambient_dim()) throw DimensionMismatch("sweep_grid: region dimension");
  GridSweep s;
  s.region = region;
  s.results = parallel_map(static_cast<std::size_t>(region.size()), jobs, [&](std::size_t i) {
    return project(manifold, region.point(static_cast<long>(i)), opts);
  });
  return s;
}

std::vector<long> foot_jump_points(const GridSweep& sweep) {
  const GridRegion& g = sweep.region;
  const double jump = 2.0 * g.spacing().norm();
  std::vector<long> out;
  for (long f = 0; f < g.size(); ++f) {
    const ProjectionResult& r = sweep.results[f];
    if (!r.unique()) continue;
    std::vector<int> idx = g.index(f);
    bool flagged = false;
    for (int i = 0; i < g.dim() && !flagged; ++i) {
      for (int step : {-1, 1}) {
        const int k = idx[i] + step;
        if (k < 0 || k >= g.n[i]) continue;
        std::vector<int> nb = idx;
        nb[i] = k;
        const ProjectionResult& q = sweep.results[g.flat(nb)];
        if (!q.unique() || (q.foot().point - r.foot().point).norm() > jump) {
          flagged = true;
          break;
        }
      }
    }
    if (flagged) out.push_back(f);
  }
  return out;
}

namespace {

struct Refinement {
  std::optional<MaximalBall> ball;
  bool adjacent = false;
};

bool same_foot(const ProjectionResult& r, const Vec& foot, const Vec& x) {
  return r.unique() && (r.foot().point - foot).norm() <= 1e-6 * scale_of(x);
}

Refinement refine(const ManifoldSpec& manifold, const Vec& x, const LocalMinimum& foot,
                  double window, double tol, const ProjectionOptions& opts) {
  Refinement out;
  const Vec v = x - foot.point;
  const double delta = v.norm();
  if (delta <= 1e-12 * scale_of(x)) return out;

  out.adjacent = !same_foot(project(manifold, foot.point + 1.01 * v, opts), foot.point, x);

  const NormalRay ray = NormalRay::make(manifold, foot.chart_index, foot.chart_coords, v, false);
  FrontierOptions fo;
  fo.projection = opts;
  double lo = delta;
  double hi = delta + window;
  if (foot_agrees(manifold, ray, hi, fo)) return out;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (foot_agrees(manifold, ray, mid, fo)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  MaximalBall ball;
  ball.center = endpoint(ray, lo);
  ball.radius = lo;
  ball.refined = true;
  ball.witness_feet.push_back(foot.point);
  const ProjectionResult beyond = project(manifold, endpoint(ray, hi), opts);
  for (const LocalMinimum& lm : beyond.minima) {
    if ((lm.point - foot.point).norm() > opts.tol_sep_rel * scale_of(x)) {
      ball.witness_feet.push_back(lm.point);
    }
  }
  out.ball = std::move(ball);
  return out;
}

}  // namespace

SkeletonCloud skeleton_from_sweep(const ManifoldSpec& manifold, const GridSweep& sweep,
                                  const ProjectionOptions& opts, int jobs) {
  const GridRegion& g = sweep.region;
  SkeletonCloud cloud;
  cloud.region = g;
  cloud.resolution = g.spacing();
  for (long f = 0; f < g.size(); ++f) {
    const ProjectionResult& r = sweep.results[f];
    if (r.multiplicity == Multiplicity::Multiple) {
      MaximalBall b;
      b.center = g.point(f);
      b.radius = r.global_distance;
      for (const LocalMinimum& lm : r.minima) b.witness_feet.push_back(lm.point);
      cloud.balls.push_back(std::move(b));
    } else if (r.multiplicity == Multiplicity::None) {
      cloud.truncation_induced.push_back(g.point(f));
    }
  }
  const std::vector<long> cand = foot_jump_points(sweep);
  const double window = 2.0 * cloud.resolution.norm();
  const double tol = 1e-2 * cloud.resolution.minCoeff();
  const std::vector<Refinement> refs = parallel_map(cand.size(), jobs, [&](std::size_t i) {
    return refine(manifold, g.point(cand[i]), sweep.results[cand[i]].foot(), window, tol, opts);
  });
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (refs[i].ball) cloud.balls.push_back(*refs[i].ball);
    if (refs[i].adjacent) cloud.skeleton_adjacent.push_back(g.point(cand[i]));
  }
  return cloud;
}

SkeletonCloud skeleton_sample(const ManifoldSpec& manifold, const GridRegion& region,
                              const ProjectionOptions& opts, int jobs) {
  return skeleton_from_sweep(manifold, sweep_grid(manifold, region, opts, jobs), opts, jobs);
}

bool medial_recover(const SkeletonCloud& cloud, const HalfSpaceSet& hs, const Vec& query) {
  for (const MaximalBall& b : cloud.balls) {
    if ((query - b.center).norm() < b.radius * (1.0 - 1e-12)) return true;
  }
  return hs.outside(query, 1e-12 * scale_of(query));
}

double one_sided_gap(const std::vector<Vec>& a, const std::vector<Vec>& b, const Vec& spacing) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Vec& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& q : b) {
      best = std::min(best, (p - q).cwiseQuotient(spacing).squaredNorm());
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

ECompReport e_complement_check(const ManifoldSpec& manifold, const GridRegion& region,
                               const ProjectionOptions& opts, int jobs) {
  const GridSweep sweep = sweep_grid(manifold, region, opts, jobs);
  ECompReport rep;
  rep.cloud = skeleton_from_sweep(manifold, sweep, opts, jobs);

  std::vector<long> to_classify = foot_jump_points(sweep);
  for (long f = 0; f < region.size(); ++f) {
    if (!sweep.results[f].unique()) to_classify.push_back(f);
  }
  std::sort(to_classify.begin(), to_classify.end());
  const double probe = region.spacing().maxCoeff();
  const std::vector<PointLabel> labels =
      parallel_map(to_classify.size(), jobs, [&](std::size_t i) {
        return classify(manifold, region.point(to_classify[i]), probe, opts).label;
      });
  for (std::size_t i = 0; i < to_classify.size(); ++i) {
    if (labels[i] == PointLabel::InteriorE) continue;
    rep.estimate.push_back(region.point(to_classify[i]));
    rep.estimate_labels.push_back(labels[i]);
  }

  // Refined centres can leave the sampled box; both sets live inside it.
  const Box box(region.lo, region.hi);
  for (const MaximalBall& b : rep.cloud.balls) {
    if (box.contains(b.center)) rep.decomposition.push_back(b.center);
  }
  for (const Vec& p : rep.cloud.truncation_induced) rep.decomposition.push_back(p);

  const Vec h = region.spacing();
  rep.estimate_to_decomposition = one_sided_gap(rep.estimate, rep.decomposition, h);
  rep.decomposition_to_estimate = one_sided_gap(rep.decomposition, rep.estimate, h);
  rep.within_two_cells = rep.estimate_to_decomposition <= 2.0 && rep.decomposition_to_estimate <= 2.0;
  return rep;
}

}  // namespace projgeom
