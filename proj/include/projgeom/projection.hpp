#pragma once

#include "projgeom/manifold.hpp"

#include <cstdint>
#include <vector>

namespace projgeom {

struct ProjectionOptions {
  /// Feet are distinct if they differ by more than tol_sep_rel * (1 + |x|).
  double tol_sep_rel = 1e-5;
  /// Minima count as global if within tol_dist_rel * (1 + |x|) of the best.
  double tol_dist_rel = 1e-7;
  int grid_per_dim = 5;
  int quasi_random_starts = 32;
  int max_iterations = 200;
  double step_tol = 1e-12;
  std::uint64_t seed = 0;
};

struct LocalMinimum {
  int chart_index = 0;
  Vec chart_coords;
  Vec point;
  double distance = 0.0;
  /// Minimizer pinned to a truncated face with the objective still
  /// decreasing outward: an artifact of the cut, not a nearest point.
  bool on_truncation = false;
};

enum class Multiplicity { Unique, Multiple, None };

struct SolverDiagnostics {
  int starts_used = 0;
  double converged_fraction = 0.0;
  /// Fewer than half of the starts converged but the best minima agreed.
  bool low_convergence = false;
};

struct ProjectionResult {
  /// Deduplicated global minima sorted by distance.
  std::vector<LocalMinimum> minima;
  double global_distance = 0.0;
  Multiplicity multiplicity = Multiplicity::None;
  SolverDiagnostics diagnostics;

  bool unique() const { return multiplicity == Multiplicity::Unique; }
  const LocalMinimum& foot() const { return minima.front(); }
};

/// All global minimizers of |psi(y) - x|^2 over every chart box.
ProjectionResult project(const ManifoldSpec& manifold, const Vec& x,
                         const ProjectionOptions& opts = {});

double distance(const ManifoldSpec& manifold, const Vec& x, const ProjectionOptions& opts = {});

/// Nearest sample of a tensor grid with grid_n points per parameter axis.
/// Independent of the iterative solver; used as a reference.
ProjectionResult brute_force_project(const ManifoldSpec& manifold, const Vec& x, long grid_n);

/// Refines a known approximate foot by a single local solve from its chart
/// coordinates. Returns the converged minimum (no global search).
LocalMinimum local_project(const ManifoldSpec& manifold, const Vec& x, int chart_index,
                           const Vec& start, const ProjectionOptions& opts = {});

enum class PointLabel { InteriorE, BoundaryOrOutsideE, SkeletonCandidate, NoNearestPoint };

const char* to_string(PointLabel label);
const char* to_string(Multiplicity m);

struct PointClass {
  PointLabel label = PointLabel::InteriorE;
  ProjectionResult witness;
};

/// Heuristic membership test for the open domain of the projection. A point
/// with a unique foot xi is interior if (a) moving probe_eps further along
/// x - xi keeps the foot and (b) the 2d axis probes at radius probe_eps are
/// unique with feet moving continuously: a move above 2 probe_eps is bisected
/// along the probe segment and rejected if it survives as a jump.
PointClass classify(const ManifoldSpec& manifold, const Vec& x, double probe_eps,
                    const ProjectionOptions& opts = {});

/// classify with probe_eps = 1e-3 * (1 + |x|).
PointClass classify(const ManifoldSpec& manifold, const Vec& x,
                    const ProjectionOptions& opts = {});

inline double scale_of(const Vec& x) { return 1.0 + x.norm(); }

}  // namespace projgeom
