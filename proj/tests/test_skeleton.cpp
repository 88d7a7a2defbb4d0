#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projgeom/catalog.hpp"
#include "projgeom/hull.hpp"
#include "projgeom/skeleton.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>

using namespace projgeom;
using support::v2;

TEST_CASE("grid indexing round-trips") {
  const GridRegion g(v2(-1, 0), v2(1, 3), 4);
  CHECK(g.size() == 16);
  CHECK((g.spacing() - v2(2.0 / 3, 1.0)).norm() <= 1e-15);
  for (long f = 0; f < g.size(); ++f) CHECK(g.flat(g.index(f)) == f);
  CHECK((g.point(0) - v2(-1, 0)).norm() == 0.0);
  CHECK((g.point(g.size() - 1) - v2(1, 3)).norm() <= 1e-15);
  CHECK_THROWS_AS(GridRegion(v2(0, 0), v2(1, 1), 1), ValidationError);
}

TEST_CASE("one-sided gaps in cell units") {
  const Vec h = v2(0.5, 0.5);
  CHECK(one_sided_gap({}, {v2(0, 0)}, h) == 0.0);
  CHECK(one_sided_gap({v2(0, 0)}, {}, h) == std::numeric_limits<double>::infinity());
  CHECK(one_sided_gap({v2(0, 0), v2(1.5, 0)}, {v2(0, 0)}, h) == doctest::Approx(3.0));
  CHECK(one_sided_gap({v2(0, 0)}, {v2(0, 0), v2(1.5, 0)}, h) == 0.0);
}

TEST_CASE("two sites: the skeleton is the perpendicular bisector") {
  const ManifoldSpec m = catalog::point_set({v2(-1, 0), v2(1, 0.5)});
  const GridRegion g(v2(-2, -2), v2(2, 2), 41);
  const SkeletonCloud cloud = skeleton_sample(m, g);
  REQUIRE(cloud.balls.size() >= 20);
  for (const MaximalBall& b : cloud.balls) {
    const double d0 = (b.center - v2(-1, 0)).norm();
    const double d1 = (b.center - v2(1, 0.5)).norm();
    CHECK(std::abs(d0 - d1) <= 0.01 * 0.1 * 2 + 1e-9);
    CHECK(b.radius <= std::min(d0, d1) + 1e-9);
  }
  CHECK(cloud.truncation_induced.empty());
}

TEST_CASE("circle: skeleton collapses to the centre") {
  const ManifoldSpec c = catalog::unit_circle();
  const GridRegion g(v2(-2, -2), v2(2, 2), 41);
  const SkeletonCloud cloud = skeleton_sample(c, g);
  REQUIRE_FALSE(cloud.balls.empty());
  for (const MaximalBall& b : cloud.balls) {
    CHECK(b.center.norm() <= 2 * g.spacing().norm());
    CHECK(b.radius <= 1.0 + 1e-9);
    CHECK(b.radius >= 1.0 - 2 * g.spacing().norm());
  }
}

TEST_CASE("skeleton points carry certified radii") {
  const ManifoldSpec h = catalog::half_parabola();
  const GridRegion g(v2(-3, 0), v2(3, 5), 31);
  const SkeletonCloud cloud = skeleton_sample(h, g);
  REQUIRE_FALSE(cloud.balls.empty());
  for (const MaximalBall& b : cloud.balls) {
    // The ball must not meet the curve: radius <= distance to it.
    const auto ref = support::nearest_on_curve([](double t) { return v2(t, t * t); }, 0, 4, b.center);
    CHECK(b.radius <= ref.distance + 1e-7);
    CHECK(b.witness_feet.size() >= 2);
  }
}

TEST_CASE("truncation-induced points are separated out") {
  const ManifoldSpec l = catalog::line(v2(0, 0), v2(1, 0), 1.0);
  const GridRegion g(v2(-2, -1), v2(2, 1), 21);
  const SkeletonCloud cloud = skeleton_sample(l, g);
  CHECK_FALSE(cloud.truncation_induced.empty());
  for (const Vec& p : cloud.truncation_induced) CHECK(std::abs(p[0]) > 1.0 - 1e-12);
}

TEST_CASE("medial recovery of the circle's complement") {
  const ManifoldSpec c = catalog::unit_circle();
  const GridRegion g(v2(-2, -2), v2(2, 2), 41);
  const SkeletonCloud cloud = skeleton_sample(c, g);
  const HalfSpaceSet hs = convex_hull_halfspaces(c, 256);
  CHECK(medial_recover(cloud, hs, v2(0.1, 0.2)));
  CHECK(medial_recover(cloud, hs, v2(1.5, 1.5)));
  CHECK_FALSE(medial_recover(cloud, hs, v2(1, 0)));
  CHECK_FALSE(medial_recover(cloud, hs, v2(0, -1)));
}

TEST_CASE("sweeps are independent of the job count") {
  const ManifoldSpec h = catalog::half_parabola();
  const GridRegion g(v2(-1, 0), v2(1, 2), 15);
  const GridSweep a = sweep_grid(h, g, {}, 1);
  const GridSweep b = sweep_grid(h, g, {}, 3);
  REQUIRE(a.results.size() == b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].multiplicity == b.results[i].multiplicity);
    CHECK(a.results[i].global_distance == b.results[i].global_distance);
  }
  CHECK(foot_jump_points(a) == foot_jump_points(b));
}
