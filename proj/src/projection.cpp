#include "projgeom/projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

namespace projgeom {

namespace {

struct SolveOutcome {
  Vec y;
  Vec point;
  double distance = 0.0;
  bool converged = false;
  bool is_minimum = false;
  bool on_truncation = false;
};

double objective(const Chart& chart, const Vec& x, const Vec& y, ChartJet& jet) {
  chart.jet(y, 0, jet);
  return 0.5 * (jet.value - x).squaredNorm();
}

// Gradient J^T r and Hessian J^T J + sum_k r_k H_k of 0.5 |psi - x|^2.
void gradient_hessian(const ChartJet& jet, const Vec& x, bool second_order, Vec& g, Mat& h) {
  const Vec r = jet.value - x;
  g = jet.jacobian.transpose() * r;
  h = jet.jacobian.transpose() * jet.jacobian;
  if (second_order) {
    for (int k = 0; k < r.size(); ++k) h += r[k] * jet.hessians[k];
  }
}

// Coordinates pinned to a face with the gradient pushing outward.
std::vector<bool> fixed_set(const Box& box, const Vec& y, const Vec& g) {
  std::vector<bool> fixed(y.size(), false);
  for (int i = 0; i < y.size(); ++i) {
    fixed[i] = (y[i] <= box.lo[i] && g[i] > 0.0) || (y[i] >= box.hi[i] && g[i] < 0.0);
  }
  return fixed;
}

// Damped Newton (Levenberg) iteration with box projection from one start.
SolveOutcome solve_from(const Chart& chart, const Vec& x, Vec y, const ProjectionOptions& opts) {
  SolveOutcome out;
  ChartJet jet;
  const int m = chart.param_dim();
  const Box& box = chart.domain();
  const double scale = scale_of(x);

  if (m == 0) {
    chart.jet(y, 0, jet);
    out.y = y;
    out.point = jet.value;
    out.distance = (jet.value - x).norm();
    out.converged = out.is_minimum = true;
    return out;
  }

  const bool second_order = chart.has_hessian();
  const int order = second_order ? 2 : 1;
  y = box.clamp(y);
  chart.jet(y, order, jet);
  double f = 0.5 * (jet.value - x).squaredNorm();
  Vec g;
  Mat h;
  gradient_hessian(jet, x, second_order, g, h);

  double mu = 0.0;
  int escapes = 0;
  ChartJet trial;
  const auto gtol_of = [&](const ChartJet& j) {
    return 8.0 * kMachineEps * scale * std::max(1.0, j.jacobian.norm());
  };

  for (int it = 0; it < opts.max_iterations; ++it) {
    const std::vector<bool> fixed = fixed_set(box, y, g);
    std::vector<int> free;
    for (int i = 0; i < m; ++i) {
      if (!fixed[i]) free.push_back(i);
    }
    const int nf = static_cast<int>(free.size());
    Vec gf(nf);
    Mat hf(nf, nf);
    for (int a = 0; a < nf; ++a) {
      gf[a] = g[free[a]];
      for (int b = 0; b < nf; ++b) hf(a, b) = h(free[a], free[b]);
    }
    const double hnorm = 1.0 + hf.norm();

    if (nf == 0 || gf.norm() <= gtol_of(jet)) {
      // Stationary. Escape along negative curvature when not a minimum.
      if (nf > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> eig(hf);
        const double lmin = eig.eigenvalues()[0];
        if (lmin < -1e-8 * hnorm) {
          if (escapes >= 4) break;
          ++escapes;
          Vec dir = Vec::Zero(m);
          const Vec e = eig.eigenvectors().col(0);
          for (int a = 0; a < nf; ++a) dir[free[a]] = e[a];
          const double alpha = 1e-3 * std::max(1e-6, box.width().maxCoeff());
          Vec best = y;
          double fbest = f;
          for (double sgn : {1.0, -1.0}) {
            const Vec cand = box.clamp(y + sgn * alpha * dir);
            const double fc = objective(chart, x, cand, trial);
            if (fc < fbest) {
              fbest = fc;
              best = cand;
            }
          }
          if (fbest >= f) break;
          y = best;
          chart.jet(y, order, jet);
          f = 0.5 * (jet.value - x).squaredNorm();
          gradient_hessian(jet, x, second_order, g, h);
          mu = 0.0;
          continue;
        }
      }
      out.converged = true;
      break;
    }

    bool accepted = false;
    Vec ynew;
    double fnew = f;
    for (int attempt = 0; attempt < 40; ++attempt) {
      const Mat a = hf + mu * Mat::Identity(nf, nf);
      Eigen::LLT<Mat> llt(a);
      if (llt.info() != Eigen::Success) {
        mu = std::max(4.0 * mu, 1e-8 * hnorm);
        continue;
      }
      const Vec step = -llt.solve(gf);
      ynew = y;
      for (int k = 0; k < nf; ++k) ynew[free[k]] += step[k];
      ynew = box.clamp(ynew);
      fnew = objective(chart, x, ynew, trial);
      if (fnew < f || (fnew <= f && (ynew - y).norm() <= opts.step_tol * (1.0 + y.norm()))) {
        accepted = true;
        break;
      }
      // Near the minimum f stops resolving the step (its change drops below
      // rounding); fall back to requiring a smaller gradient.
      if (fnew <= f + 8.0 * kMachineEps * (f + scale * scale)) {
        chart.jet(ynew, 1, trial);
        const Vec gnew = trial.jacobian.transpose() * (trial.value - x);
        double gn = 0.0;
        for (int k = 0; k < nf; ++k) gn += gnew[free[k]] * gnew[free[k]];
        if (std::sqrt(gn) < 0.5 * gf.norm()) {
          accepted = true;
          break;
        }
      }
      mu = std::max(4.0 * mu, 1e-8 * hnorm);
    }
    if (!accepted) {
      out.converged = gf.norm() <= 1e-7 * scale * std::max(1.0, jet.jacobian.norm());
      break;
    }
    const double step_norm = (ynew - y).norm();
    y = ynew;
    f = fnew;
    chart.jet(y, order, jet);
    gradient_hessian(jet, x, second_order, g, h);
    mu = (mu < 1e-12 * hnorm) ? 0.0 : 0.25 * mu;
    if (step_norm <= opts.step_tol * (1.0 + y.norm())) {
      out.converged = true;
      break;
    }
  }

  out.y = y;
  out.point = jet.value;
  out.distance = (jet.value - x).norm();

  // Second-order check on the free block.
  const std::vector<bool> fixed = fixed_set(box, y, g);
  std::vector<int> free;
  for (int i = 0; i < m; ++i) {
    if (!fixed[i]) free.push_back(i);
  }
  out.is_minimum = true;
  if (!free.empty()) {
    Mat hf(free.size(), free.size());
    for (size_t a = 0; a < free.size(); ++a) {
      for (size_t b = 0; b < free.size(); ++b) hf(a, b) = h(free[a], free[b]);
    }
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(hf).eigenvalues()[0];
    out.is_minimum = lmin >= -1e-8 * (1.0 + hf.norm());
  }
  const double gtol = 1e-9 * scale * std::max(1.0, jet.jacobian.norm());
  for (int i = 0; i < m; ++i) {
    if ((y[i] <= box.lo[i] && box.truncated_lo[i] && g[i] > gtol) ||
        (y[i] >= box.hi[i] && box.truncated_hi[i] && g[i] < -gtol)) {
      out.on_truncation = true;
    }
  }
  return out;
}

constexpr std::array<int, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(long index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

// Tensor grid (endpoints included) plus Cranley-Patterson shifted Halton points.
std::vector<Vec> start_points(const Box& box, int chart_index, const ProjectionOptions& opts) {
  const int m = box.dim();
  std::vector<Vec> starts;
  if (m == 0) {
    starts.emplace_back(0);
    return starts;
  }
  const int n = std::max(1, opts.grid_per_dim);
  long total = 1;
  for (int i = 0; i < m; ++i) total *= n;
  for (long idx = 0; idx < total; ++idx) {
    Vec y(m);
    long rem = idx;
    for (int i = 0; i < m; ++i) {
      const long k = rem % n;
      rem /= n;
      const double t = n == 1 ? 0.5 : static_cast<double>(k) / (n - 1);
      y[i] = box.lo[i] + t * (box.hi[i] - box.lo[i]);
    }
    starts.push_back(std::move(y));
  }
  std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(chart_index));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec shift(m);
  for (int i = 0; i < m; ++i) shift[i] = unif(rng);
  for (int s = 0; s < opts.quasi_random_starts; ++s) {
    Vec y(m);
    for (int i = 0; i < m; ++i) {
      double u = radical_inverse(s + 1, kPrimes[i % kPrimes.size()]) + shift[i];
      u -= std::floor(u);
      y[i] = box.lo[i] + u * (box.hi[i] - box.lo[i]);
    }
    starts.push_back(std::move(y));
  }
  return starts;
}

bool minimum_less(const LocalMinimum& a, const LocalMinimum& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.chart_index != b.chart_index) return a.chart_index < b.chart_index;
  for (int i = 0; i < a.chart_coords.size(); ++i) {
    if (a.chart_coords[i] != b.chart_coords[i]) return a.chart_coords[i] < b.chart_coords[i];
  }
  return false;
}

}  // namespace

ProjectionResult project(const ManifoldSpec& manifold, const Vec& x,
                         const ProjectionOptions& opts) {
  if (x.size() != manifold.ambient_dim()) throw DimensionMismatch("project: point dimension");
  if (!x.allFinite()) throw PreconditionError("project: point must be finite");
  const double scale = scale_of(x);
  const double tol_dist = opts.tol_dist_rel * scale;
  const double tol_sep = opts.tol_sep_rel * scale;

  std::vector<LocalMinimum> found;
  int starts_used = 0;
  int converged = 0;
  for (int c = 0; c < static_cast<int>(manifold.charts.size()); ++c) {
    const Chart& chart = manifold.charts[c];
    for (const Vec& start : start_points(chart.domain(), c, opts)) {
      ++starts_used;
      const SolveOutcome s = solve_from(chart, x, start, opts);
      if (!s.converged) continue;
      ++converged;
      if (!s.is_minimum) continue;
      found.push_back({c, s.y, s.point, s.distance, s.on_truncation});
    }
  }

  ProjectionResult result;
  result.diagnostics.starts_used = starts_used;
  result.diagnostics.converged_fraction =
      starts_used > 0 ? static_cast<double>(converged) / starts_used : 0.0;
  if (found.empty()) throw SolverFailure("project: no start converged to a minimum");

  std::sort(found.begin(), found.end(), minimum_less);
  const double best = found.front().distance;
  std::vector<LocalMinimum> global;
  for (const LocalMinimum& lm : found) {
    if (lm.distance > best + tol_dist) break;
    global.push_back(lm);
  }
  const int agreeing = static_cast<int>(global.size());
  const bool all_cut = std::all_of(global.begin(), global.end(),
                                   [](const LocalMinimum& lm) { return lm.on_truncation; });
  // A point pinned to a cut face is not a nearest point of the manifold
  // (near a chart seam the true one lies just across it).
  if (!all_cut) {
    std::erase_if(global, [](const LocalMinimum& lm) { return lm.on_truncation; });
  }
  for (const LocalMinimum& lm : global) {
    bool duplicate = false;
    for (const LocalMinimum& kept : result.minima) {
      if ((kept.point - lm.point).norm() <= tol_sep) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) result.minima.push_back(lm);
  }
  if (result.diagnostics.converged_fraction < 0.5) {
    if (agreeing < 2) throw SolverFailure("project: fewer than half of the starts converged");
    result.diagnostics.low_convergence = true;
  }
  result.global_distance = result.minima.front().distance;
  if (all_cut) {
    result.multiplicity = Multiplicity::None;
  } else {
    result.multiplicity =
        result.minima.size() == 1 ? Multiplicity::Unique : Multiplicity::Multiple;
  }
  return result;
}

double distance(const ManifoldSpec& manifold, const Vec& x, const ProjectionOptions& opts) {
  return project(manifold, x, opts).global_distance;
}

ProjectionResult brute_force_project(const ManifoldSpec& manifold, const Vec& x, long grid_n) {
  if (grid_n < 2) throw PreconditionError("brute_force_project: grid_n must be >= 2");
  if (x.size() != manifold.ambient_dim()) throw DimensionMismatch("brute_force_project");
  LocalMinimum best;
  best.distance = std::numeric_limits<double>::infinity();
  long samples = 0;
  ChartJet jet;
  for (int c = 0; c < static_cast<int>(manifold.charts.size()); ++c) {
    const Chart& chart = manifold.charts[c];
    const Box& box = chart.domain();
    const int m = chart.param_dim();
    long total = 1;
    for (int i = 0; i < m; ++i) total *= grid_n;
    Vec y(m);
    for (long idx = 0; idx < total; ++idx) {
      long rem = idx;
      for (int i = 0; i < m; ++i) {
        const long k = rem % grid_n;
        rem /= grid_n;
        y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(k) / (grid_n - 1);
      }
      chart.jet(y, 0, jet);
      ++samples;
      const double dist = (jet.value - x).norm();
      if (dist < best.distance) best = {c, y, jet.value, dist, false};
    }
  }
  ProjectionResult r;
  r.minima.push_back(best);
  r.global_distance = best.distance;
  r.multiplicity = Multiplicity::Unique;
  r.diagnostics.starts_used = static_cast<int>(std::min<long>(samples, 1L << 30));
  r.diagnostics.converged_fraction = 1.0;
  return r;
}

LocalMinimum local_project(const ManifoldSpec& manifold, const Vec& x, int chart_index,
                           const Vec& start, const ProjectionOptions& opts) {
  const Chart& chart = manifold.charts.at(chart_index);
  const SolveOutcome s = solve_from(chart, x, start, opts);
  return {chart_index, s.y, s.point, s.distance, s.on_truncation};
}

const char* to_string(PointLabel label) {
  switch (label) {
    case PointLabel::InteriorE: return "InteriorE";
    case PointLabel::BoundaryOrOutsideE: return "BoundaryOrOutsideE";
    case PointLabel::SkeletonCandidate: return "SkeletonCandidate";
    case PointLabel::NoNearestPoint: return "NoNearestPoint";
  }
  return "?";
}

const char* to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::Unique: return "Unique";
    case Multiplicity::Multiple: return "Multiple";
    case Multiplicity::None: return "None";
  }
  return "?";
}

PointClass classify(const ManifoldSpec& manifold, const Vec& x, double probe_eps,
                    const ProjectionOptions& opts) {
  if (!(probe_eps > 0.0)) throw PreconditionError("classify: probe_eps must be positive");
  PointClass pc;
  pc.witness = project(manifold, x, opts);
  switch (pc.witness.multiplicity) {
    case Multiplicity::None: pc.label = PointLabel::NoNearestPoint; return pc;
    case Multiplicity::Multiple: pc.label = PointLabel::SkeletonCandidate; return pc;
    case Multiplicity::Unique: break;
  }
  const Vec& foot = pc.witness.foot().point;
  const double still = std::max(1e-3 * probe_eps, opts.tol_sep_rel * scale_of(x));
  auto same_foot = [&](const ProjectionResult& r) {
    return r.unique() && (r.foot().point - foot).norm() <= still;
  };
  pc.label = PointLabel::BoundaryOrOutsideE;

  // Extension: one probe radius further along x - p(x) keeps the foot.
  const Vec v = x - foot;
  if (v.norm() > still && !same_foot(project(manifold, x + probe_eps * v / v.norm(), opts))) {
    return pc;
  }
  // Axis probes: unique, with the foot moving continuously. A move larger
  // than kLip * probe_eps is bisected along the probe segment: a jump keeps
  // its size as the bracket shrinks, a continuous move does not.
  constexpr double kLip = 2.0;
  constexpr int kBisect = 40;
  for (int i = 0; i < x.size(); ++i) {
    const Vec e = Vec::Unit(x.size(), i);
    for (double sgn : {1.0, -1.0}) {
      const ProjectionResult r1 = project(manifold, x + sgn * probe_eps * e, opts);
      if (!r1.unique()) return pc;
      if ((r1.foot().point - foot).norm() <= kLip * probe_eps) continue;
      double a = 0.0, b = probe_eps;
      Vec fa = foot, fb = r1.foot().point;
      for (int k = 0; k < kBisect && b - a > 1e-9 * probe_eps; ++k) {
        const double m = 0.5 * (a + b);
        const ProjectionResult rm = project(manifold, x + sgn * m * e, opts);
        if (!rm.unique()) return pc;
        const Vec fm = rm.foot().point;
        if ((fm - fa).norm() >= (fb - fm).norm()) {
          b = m;
          fb = fm;
        } else {
          a = m;
          fa = fm;
        }
      }
      if ((fb - fa).norm() > still) return pc;
    }
  }
  pc.label = PointLabel::InteriorE;
  return pc;
}

PointClass classify(const ManifoldSpec& manifold, const Vec& x, const ProjectionOptions& opts) {
  return classify(manifold, x, 1e-3 * scale_of(x), opts);
}

}  // namespace projgeom
