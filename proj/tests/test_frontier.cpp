#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projgeom/catalog.hpp"
#include "projgeom/curvature.hpp"
#include "projgeom/frontier.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace projgeom;
using support::v1;
using support::v2;
using support::v3;

namespace {

void check_trace_invariants(const FrontierEstimate& e, const FrontierOptions& o) {
  CHECK(e.theta_lo <= e.theta_hi);
  if (!e.unbounded()) CHECK(e.theta_hi - e.theta_lo <= o.tol * (1 + 1e-12));
  for (const auto& [r, ok] : e.trace) {
    if (r < e.theta_lo) CHECK(ok);
    if (r >= e.theta_hi && !e.unbounded()) CHECK_FALSE(ok);
  }
}

}  // namespace

TEST_CASE("half-parabola frontier at the vertex is the focal height") {
  const ManifoldSpec h = catalog::half_parabola();
  const FrontierOptions o;
  const FrontierEstimate e = frontier(h, NormalRay::make(h, 0, v1(0), v2(0, 1)), o);
  REQUIRE_FALSE(e.unbounded());
  CHECK(e.theta_lo >= 0.5 - o.tol);
  CHECK(e.theta_hi <= 0.5 + o.tol);
  check_trace_invariants(e, o);
}

TEST_CASE("circle: unit frontier inward, unbounded outward") {
  const ManifoldSpec c = catalog::unit_circle();
  FrontierOptions o;
  o.r_max = 10.0;
  const NormalRay in = NormalRay::make(c, 0, v1(1.0), -v2(std::cos(1.0), std::sin(1.0)));
  const FrontierEstimate e = frontier(c, in, o);
  CHECK(std::abs(e.theta().value() - 1.0) <= 1e-5);
  check_trace_invariants(e, o);
  const FrontierEstimate out = frontier(c, in.flipped(), o);
  REQUIRE(out.unbounded());
  CHECK(*out.unbounded_beyond == 10.0);
  CHECK(out.theta().is_unbounded());
}

TEST_CASE("flat truncated line is unbounded") {
  const ManifoldSpec l = catalog::line(v2(0, 0), v2(1, 0), 5.0);
  const FrontierEstimate e = frontier(l, NormalRay::make(l, 0, v1(0.5), v2(0, 1)));
  CHECK(e.unbounded());
}

TEST_CASE("two parallel lines: frontier is half the gap") {
  const ManifoldSpec t = catalog::two_parallel_lines(1.0, 10.0);
  const FrontierEstimate e = frontier(t, NormalRay::make(t, 0, v1(0.0), v2(0, -1)));
  CHECK(std::abs(e.theta().value() - 1.0) <= 1e-5);
}

TEST_CASE("frontier never exceeds the radius of curvature") {
  const ManifoldSpec p = catalog::parabola();
  for (double t : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
    const NormalRay ray = NormalRay::make(p, 0, v1(t), v2(-2 * t, 1));
    const FrontierEstimate e = frontier(p, ray);
    const ExtendedReal rho = radius_of_curvature(p, ray);
    REQUIRE(rho.is_finite());
    CHECK(e.theta_hi <= rho.value() * (1 + 1e-3));
  }
  // At the vertex the two coincide.
  const NormalRay v = NormalRay::make(p, 0, v1(0), v2(0, 1));
  CHECK(std::abs(frontier(p, v).theta().value() - 0.5) <= 1e-3);
}

TEST_CASE("foot agreement predicate") {
  const ManifoldSpec c = catalog::unit_circle();
  const NormalRay in = NormalRay::make(c, 0, v1(0.0), v2(-1, 0));
  CHECK(foot_agrees(c, in, 0.5, {}));
  CHECK_FALSE(foot_agrees(c, in, 1.5, {}));
}

TEST_CASE("scaling maps and the fibre-bundle chart") {
  CHECK(theta_bar(ExtendedReal::finite(2.0), 1.0) == 2.0);
  CHECK(theta_under(ExtendedReal::finite(2.0), 2.0) == 0.5);
  CHECK(theta_bar(ExtendedReal::unbounded(), 5.0) == 1.0);
  CHECK(theta_under(ExtendedReal::unbounded(), 5.0) == 1.0);
  CHECK_THROWS_AS(theta_bar(ExtendedReal::finite(1.0), 1.0), FiberOverflow);
  // theta_under inverts theta_bar along a ray: |v| -> theta_bar |v| -> |v|.
  for (double v : {0.0, 0.3, 0.9}) {
    const ExtendedReal th = ExtendedReal::finite(1.0);
    const double w = theta_bar(th, v) * v;
    CHECK(theta_under(th, w) * w == doctest::Approx(v));
  }

  const ManifoldSpec c = catalog::unit_circle();
  for (const Vec& x : {v2(0.4, 0.3), v2(-1.5, 2.0), v2(0.0, -0.2)}) {
    const BundlePoint bp = bundle_chart(c, x);
    CHECK((bundle_chart_inverse(c, bp.chart_index, bp.chart_coords, bp.w) - x).norm() <= 1e-9);
  }
  CHECK_THROWS_AS(bundle_chart(c, v2(0, 0)), PreconditionError);
  const BundlePoint on = bundle_chart(c, v2(0, 1));
  CHECK(on.w.norm() == 0.0);
}

TEST_CASE("sampled normal directions") {
  const ManifoldSpec c = catalog::unit_circle();
  CHECK(sample_normal_directions(c.charts[0], v1(0), 32).size() == 2);
  const ManifoldSpec h = catalog::helix();
  const auto dirs = sample_normal_directions(h.charts[0], v1(0.3), 32);
  CHECK(dirs.size() == 4);
  const Vec t = h.charts[0].jacobian(v1(0.3)).col(0).normalized();
  for (const Vec& d : dirs) {
    CHECK(std::abs(d.norm() - 1) <= 1e-12);
    CHECK(std::abs(d.dot(t)) <= 1e-12);
  }
  const ManifoldSpec l4 = catalog::line(Vec::Zero(4), Vec::Unit(4, 0), 1.0);
  const auto d4 = sample_normal_directions(l4.charts[0], v1(0), 20);
  CHECK(d4.size() == 20);
}

TEST_CASE("reach of small closed manifolds") {
  ReachSampling s;
  s.feet_per_dim = 16;
  s.frontier.tol = 1e-5;
  const ReachReport c = reach(catalog::unit_circle(), s);
  REQUIRE(c.reach_estimate.is_finite());
  CHECK(std::abs(c.reach_estimate.value() - 1.0) <= 1e-3);
  REQUIRE(c.argmin >= 0);
  for (const FrontierEstimate& e : c.samples) {
    if (!e.unbounded()) CHECK(c.reach_estimate.value() <= e.theta_lo + 1e-12);
  }
  // Two parallel lines at distance 2 (truncated far away): reach 1.
  s.feet_per_dim = 8;
  const ReachReport t = reach(catalog::two_parallel_lines(1.0, 3.0), s);
  CHECK(std::abs(t.reach_estimate.value() - 1.0) <= 1e-3);
}

TEST_CASE("parallel profile equals the serial one") {
  const ManifoldSpec p = catalog::parabola();
  std::vector<NormalRay> rays;
  for (double t = -1; t <= 1; t += 0.25) rays.push_back(NormalRay::make(p, 0, v1(t), v2(-2 * t, 1)));
  const auto a = theta_profile(p, rays, {}, 1);
  const auto b = theta_profile(p, rays, {}, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].theta_lo == b[i].theta_lo);
    CHECK(a[i].theta_hi == b[i].theta_hi);
  }
}
