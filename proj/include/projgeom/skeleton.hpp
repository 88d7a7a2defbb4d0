#pragma once

#include "projgeom/hull.hpp"
#include "projgeom/manifold.hpp"
#include "projgeom/projection.hpp"

#include <vector>

namespace projgeom {

/// Tensor grid over a box, endpoints included, n[i] >= 2 points per axis.
struct GridRegion {
  Vec lo;
  Vec hi;
  std::vector<int> n;

  GridRegion() = default;
  GridRegion(Vec lo_, Vec hi_, int per_axis);

  int dim() const { return static_cast<int>(lo.size()); }
  long size() const;
  Vec spacing() const;
  std::vector<int> index(long flat) const;
  long flat(const std::vector<int>& idx) const;
  Vec point(long flat) const;
};

struct GridSweep {
  GridRegion region;
  std::vector<ProjectionResult> results;
};

/// project() at every grid point.
GridSweep sweep_grid(const ManifoldSpec& manifold, const GridRegion& region,
                     const ProjectionOptions& opts = {}, int jobs = 1);

/// Unique grid points with an axis neighbour that is not Unique or whose
/// foot lies more than two cell diagonals away.
std::vector<long> foot_jump_points(const GridSweep& sweep);

struct MaximalBall {
  Vec center;
  double radius = 0.0;
  /// Two or more nearest points; for refined balls the foot of the ray and
  /// the foot found just beyond the frontier.
  std::vector<Vec> witness_feet;
  /// Located by bisection along a normal ray rather than on a grid point.
  bool refined = false;
};

struct SkeletonCloud {
  std::vector<MaximalBall> balls;
  GridRegion region;
  Vec resolution;
  /// Unique grid points whose first extension step (a = 1.01) changes the foot.
  std::vector<Vec> skeleton_adjacent;
  /// Grid points without a nearest point. They arise only from chart
  /// truncation (closed manifolds have none).
  std::vector<Vec> truncation_induced;
};

/// Multiple grid points become balls directly; each foot-jump point is
/// refined by bisecting the frontier on its ray within two cell diagonals.
SkeletonCloud skeleton_from_sweep(const ManifoldSpec& manifold, const GridSweep& sweep,
                                  const ProjectionOptions& opts = {}, int jobs = 1);
SkeletonCloud skeleton_sample(const ManifoldSpec& manifold, const GridRegion& region,
                              const ProjectionOptions& opts = {}, int jobs = 1);

/// Inside some open ball of the cloud or strictly outside some half-space.
bool medial_recover(const SkeletonCloud& cloud, const HalfSpaceSet& hs, const Vec& query);

struct ECompReport {
  /// Grid points not labelled InteriorE (estimate of the complement of the
  /// projection's open domain).
  std::vector<Vec> estimate;
  std::vector<PointLabel> estimate_labels;
  /// Skeleton ball centres and truncation-induced points.
  std::vector<Vec> decomposition;
  /// One-sided Hausdorff distances in grid-cell units.
  double estimate_to_decomposition = 0.0;
  double decomposition_to_estimate = 0.0;
  bool within_two_cells = false;
  SkeletonCloud cloud;
};

/// Points away from foot jumps are taken as InteriorE; foot-jump, Multiple
/// and no-nearest-point grid points are classified with probe radius equal
/// to the largest grid spacing.
ECompReport e_complement_check(const ManifoldSpec& manifold, const GridRegion& region,
                               const ProjectionOptions& opts = {}, int jobs = 1);

/// sup_{a in A} min_{b in B} |(a - b) / spacing|; 0 for empty A, +inf for
/// nonempty A and empty B.
double one_sided_gap(const std::vector<Vec>& a, const std::vector<Vec>& b, const Vec& spacing);

}  // namespace projgeom
