#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projgeom/catalog.hpp"
#include "projgeom/projection.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace projgeom;
using support::v2;
using support::v3;

TEST_CASE("circle: radial foot and distance") {
  const ManifoldSpec c = catalog::unit_circle();
  for (double a : {0.0, 0.5, 2.0, -2.9, std::numbers::pi}) {
    for (double r : {0.2, 0.9, 1.0, 1.7, 3.0}) {
      const Vec x = r * v2(std::cos(a), std::sin(a));
      const ProjectionResult p = project(c, x);
      CAPTURE(a);
      CAPTURE(r);
      REQUIRE(p.unique());
      CHECK((p.foot().point - x / r).norm() <= 1e-9);
      CHECK(p.global_distance == doctest::Approx(std::abs(r - 1)).epsilon(1e-12));
    }
  }
  CHECK(distance(c, v2(3, 4)) == doctest::Approx(4.0));
}

TEST_CASE("circle centre has many nearest points") {
  const ProjectionResult p = project(catalog::unit_circle(), v2(0, 0));
  CHECK(p.multiplicity == Multiplicity::Multiple);
  CHECK(p.minima.size() >= 2);
  for (const LocalMinimum& m : p.minima) CHECK(m.distance == doctest::Approx(1.0));
}

TEST_CASE("sphere and torus closed forms") {
  const ManifoldSpec s = catalog::sphere(2.0, 3);
  const Vec x = v3(1, -2, 0.5);
  const ProjectionResult p = project(s, x);
  REQUIRE(p.unique());
  CHECK((p.foot().point - 2.0 * x.normalized()).norm() <= 1e-9);

  const ManifoldSpec t = catalog::torus(2.0, 0.5);
  const Vec q = v3(2.3, 0.4, 0.1);
  const ProjectionResult pt = project(t, q);
  REQUIRE(pt.unique());
  // Nearest point on the core circle, then toward q by r.
  const Vec core = 2.0 * v3(q[0], q[1], 0).normalized();
  const Vec expect = core + 0.5 * (q - core).normalized();
  CHECK((pt.foot().point - expect).norm() <= 1e-9);
}

TEST_CASE("half-parabola feet on the symmetry axis") {
  const ManifoldSpec h = catalog::half_parabola();
  for (double y : {0.1, 0.25, 0.49}) {
    const ProjectionResult p = project(h, v2(0, y));
    REQUIRE(p.unique());
    CHECK(p.foot().point.norm() <= 1e-7);
    CHECK(p.global_distance == doctest::Approx(y));
  }
  // Above the focal height 1/2 the foot leaves the vertex: |(t,t^2)-(0,y)|^2
  // = s + (s-y)^2 with s = t^2 is least at s = y - 1/2.
  for (double y : {0.75, 1.0, 2.0}) {
    const ProjectionResult p = project(h, v2(0, y));
    REQUIRE(p.unique());
    const double s = y - 0.5;
    CHECK((p.foot().point - v2(std::sqrt(s), s)).norm() <= 1e-7);
    CHECK(p.global_distance == doctest::Approx(std::sqrt(s + 0.25)).epsilon(1e-12));
  }
  const ProjectionResult p1 = project(h, v2(0, 1));
  CHECK((p1.foot().point - v2(0.5, 0.25)).norm() > 0.2);
}

TEST_CASE("solver agrees with an independent golden-section reference") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  struct Case {
    ManifoldSpec m;
    std::function<Vec(double)> curve;
    double lo, hi;
  };
  std::vector<Case> cases = {
      {catalog::parabola(), [](double t) { return v2(t, t * t); }, -3, 3},
      {catalog::half_parabola(), [](double t) { return v2(t, t * t); }, 0, 4},
      {catalog::unit_circle(), [](double t) { return v2(std::cos(t), std::sin(t)); },
       -std::numbers::pi, std::numbers::pi},
      {catalog::lip1_example(), [](double t) { return v2(t, catalog::lip1_f(t)); }, -3, 3},
  };
  for (const Case& c : cases) {
    for (int k = 0; k < 40; ++k) {
      const Vec x = v2(u(rng), u(rng) + 1.0);
      const ProjectionResult p = project(c.m, x);
      const support::CurveFoot ref = support::nearest_on_curve(c.curve, c.lo, c.hi, x);
      CAPTURE(c.m.name);
      CAPTURE(x.transpose());
      if (p.multiplicity == Multiplicity::None) continue;
      CHECK(p.global_distance <= ref.distance + 1e-9);
      CHECK(p.global_distance >= ref.distance - 1e-9);
      // Brute force over a dense chart grid never beats the solver.
      CHECK(brute_force_project(c.m, x, 4001).global_distance >= p.global_distance - 1e-12);
    }
  }
}

TEST_CASE("minima sorted and within tolerance of the global distance") {
  const ManifoldSpec t = catalog::two_parallel_lines();
  const ProjectionResult p = project(t, v2(0.3, 0));
  CHECK(p.multiplicity == Multiplicity::Multiple);
  REQUIRE(p.minima.size() == 2);
  CHECK(p.minima[0].distance <= p.minima[1].distance);
  for (const LocalMinimum& m : p.minima) {
    CHECK(std::abs(m.distance - p.global_distance) <= 1e-7 * scale_of(v2(0.3, 0)));
  }
}

TEST_CASE("truncation yields no nearest point") {
  const ManifoldSpec l = catalog::line(v2(0, 0), v2(1, 0), 10.0);
  const ProjectionResult p = project(l, v2(15, 1));
  CHECK(p.multiplicity == Multiplicity::None);
  REQUIRE_FALSE(p.minima.empty());
  CHECK(p.minima.front().on_truncation);
  // A genuine end is a nearest point.
  const ProjectionResult e = project(catalog::half_parabola(), v2(-1, -1));
  REQUIRE(e.unique());
  CHECK(e.foot().point.norm() <= 1e-12);
  CHECK_FALSE(e.foot().on_truncation);
}

TEST_CASE("point sets project to the nearest site") {
  const ManifoldSpec ps = catalog::point_set({v2(0, 0), v2(2, 0), v2(0, 3)});
  const ProjectionResult p = project(ps, v2(1.6, 0.2));
  REQUIRE(p.unique());
  CHECK((p.foot().point - v2(2, 0)).norm() == 0.0);
  CHECK(project(ps, v2(1, -5)).multiplicity == Multiplicity::Multiple);
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(project(catalog::unit_circle(), v3(1, 0, 0)), DimensionMismatch);
}

TEST_CASE("local_project refines from a nearby start") {
  const ManifoldSpec c = catalog::unit_circle();
  const LocalMinimum m = local_project(c, v2(2, 2), 0, Vec::Constant(1, 0.5));
  CHECK(m.chart_coords[0] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
}

TEST_CASE("classification labels") {
  const ManifoldSpec c = catalog::unit_circle();
  CHECK(classify(c, v2(0.5, 0.1)).label == PointLabel::InteriorE);
  CHECK(classify(c, v2(3, 1)).label == PointLabel::InteriorE);
  CHECK(classify(c, v2(0, 0)).label == PointLabel::SkeletonCandidate);
  // Within a probe radius of the centre the axis probes cross it.
  CHECK(classify(c, v2(1e-4, 0), 1e-3).label == PointLabel::BoundaryOrOutsideE);
  CHECK(classify(catalog::line(v2(0, 0), v2(1, 0), 10.0), v2(15, 1)).label ==
        PointLabel::NoNearestPoint);
  // The half-parabola's focal point (0, 1/2) has a unique foot but lies on
  // the boundary of the open domain.
  const ManifoldSpec h = catalog::half_parabola();
  CHECK(classify(h, v2(0, 0.5)).label == PointLabel::BoundaryOrOutsideE);
  CHECK(classify(h, v2(0, 0.3)).label == PointLabel::InteriorE);
  // On the switching curve y = (1 + 3 x^(2/3)) / 2 the vertex and (1, 1)
  // are both nearest to (-1, 2); on either side the foot is unique.
  CHECK(classify(h, v2(-1, 2)).label == PointLabel::SkeletonCandidate);
  CHECK(classify(h, v2(-1, 2.5)).label == PointLabel::InteriorE);
  CHECK(classify(h, v2(-1, 1.5)).label == PointLabel::InteriorE);
  // Near the cusp (0, 1/2) the foot jumps by only a few probe radii when a
  // probe crosses the switching curve.
  const double x0 = -0.015, y0 = 0.5 * (1 + 3 * std::cbrt(x0 * x0)) - 0.012;
  CHECK(classify(h, v2(x0, y0), 0.03).label == PointLabel::BoundaryOrOutsideE);
  // Across x = 0 below the focus the foot leaves the vertex continuously,
  // though fast: still interior.
  CHECK(classify(h, v2(-0.01, 0.45), 0.03).label == PointLabel::InteriorE);
}

TEST_CASE("fixed seed gives identical results") {
  ProjectionOptions o;
  o.seed = 99;
  const ManifoldSpec t = catalog::torus(2.0, 0.5);
  const ProjectionResult a = project(t, v3(0.3, 1.9, 0.2), o);
  const ProjectionResult b = project(t, v3(0.3, 1.9, 0.2), o);
  REQUIRE(a.minima.size() == b.minima.size());
  CHECK(a.foot().point == b.foot().point);
  CHECK(a.diagnostics.starts_used == b.diagnostics.starts_used);
}
