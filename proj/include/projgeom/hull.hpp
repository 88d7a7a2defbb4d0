#pragma once

#include "projgeom/manifold.hpp"

#include <vector>

namespace projgeom {

class DegenerateHull : public SolverError {
 public:
  using SolverError::SolverError;
};

struct HalfSpace {
  Vec normal;  // unit, outward
  double offset = 0.0;
};

/// Supporting half-spaces {z : <z, normal> <= offset} of a point cloud's hull.
struct HalfSpaceSet {
  std::vector<HalfSpace> halfspaces;
  /// The samples were affinely dependent and were thickened by 1e-9.
  bool thickened = false;

  /// True if z violates some half-space by more than tol.
  bool outside(const Vec& z, double tol = 1e-12) const;
};

/// Convex hull facets of points in R^2 (monotone chain) or R^3 (incremental).
/// Throws DegenerateHull if the points are affinely dependent.
HalfSpaceSet convex_hull_halfspaces(const std::vector<Vec>& points);

struct ManifoldSample {
  int chart_index = 0;
  Vec chart_coords;
  Vec point;
};

/// Cell-centred chart samples, about n_samples in total, spread over charts.
std::vector<ManifoldSample> manifold_samples(const ManifoldSpec& manifold, int n_samples);

/// Hull of manifold_samples with each offset raised to the support value
/// max_{z in M} <z, normal> (local ascent from the best sample), so the
/// half-spaces contain M rather than just the samples. Affinely dependent
/// samples are thickened by 1e-9 along the missing directions and flagged.
HalfSpaceSet convex_hull_halfspaces(const ManifoldSpec& manifold, int n_samples);

}  // namespace projgeom
