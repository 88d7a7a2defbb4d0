#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projgeom/catalog.hpp"
#include "projgeom/derivative.hpp"
#include "support.hpp"

#include <cmath>

using namespace projgeom;
using support::v2;
using support::v3;

namespace {

// Dp for the sphere of radius R centred at 0: R (I - x x^T / |x|^2) / |x|.
Mat sphere_dp(const Vec& x, double R) {
  const double n = x.norm();
  const Vec u = x / n;
  return R * (Mat::Identity(x.size(), x.size()) - u * u.transpose()) / n;
}

}  // namespace

TEST_CASE("circle spot value") {
  const Mat D = dp_formula(catalog::unit_circle(), v2(2, 0));
  Mat expect(2, 2);
  expect << 0, 0, 0, 0.5;
  CHECK((D - expect).norm() <= 1e-12);
}

TEST_CASE("formula matches the radial closed form on spheres") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n;
  const ManifoldSpec s = catalog::sphere(2.0, 3);
  for (int k = 0; k < 10; ++k) {
    Vec x = v3(n(rng), n(rng), n(rng));
    x *= (0.5 + 3.0 * std::abs(n(rng)) / 3.0) / x.norm() * 2.0;
    if (std::abs(x.norm() - 2.0) < 1e-3) continue;
    CHECK((dp_formula(s, x) - sphere_dp(x, 2.0)).norm() <= 1e-9);
  }
  const ManifoldSpec c = catalog::unit_circle();
  const Vec x = v2(-0.3, 0.2);
  CHECK((dp_formula(c, x) - sphere_dp(x, 1.0)).norm() <= 1e-10);
}

TEST_CASE("kernel and range invariants") {
  const ManifoldSpec t = catalog::torus(2.0, 0.5);
  const Vec x = v3(2.2, 0.5, 0.3);
  const DpReport r = dp_check(t, x);
  CHECK((r.formula_matrix * (r.x - r.foot)).norm() <= 1e-8);
  // Range lies in the tangent plane: orthogonal to x - xi for a surface in R^3.
  CHECK((r.formula_matrix.transpose() * (r.x - r.foot)).norm() <= 1e-8);
  CHECK(r.rel_error <= 1e-4);
}

TEST_CASE("formula agrees with finite differences on curves and surfaces") {
  const std::vector<std::pair<ManifoldSpec, Vec>> cases = {
      {catalog::parabola(), v2(0.4, 1.1)},
      {catalog::parabola(), v2(-0.7, -0.6)},
      {catalog::half_parabola(), v2(1.0, 0.2)},
      {catalog::helix(), v3(0.8, 0.9, 0.4)},
      {catalog::torus(2.0, 0.5), v3(-1.7, 0.2, -0.35)},
  };
  for (const auto& [m, x] : cases) {
    CAPTURE(m.name);
    const DpReport r = dp_check(m, x);
    CHECK(r.rel_error <= 1e-4);
  }
}

TEST_CASE("points on the manifold give the tangent projector") {
  const ManifoldSpec c = catalog::unit_circle();
  const Mat D = dp_formula(c, v2(0, 1));
  Mat expect(2, 2);
  expect << 1, 0, 0, 0;
  CHECK((D - expect).norm() <= 1e-9);
}

TEST_CASE("gradient of the squared distance") {
  const ManifoldSpec p = catalog::parabola();
  const Vec x = v2(0.3, 1.4);
  const Vec g = grad_delta_squared(p, x);
  // Independent: central differences of the golden-section distance.
  auto d2 = [](const Vec& q) {
    const auto f = support::nearest_on_curve([](double t) { return v2(t, t * t); }, -3, 3, q);
    return f.distance * f.distance;
  };
  const double h = 1e-5;
  Vec fd(2);
  for (int i = 0; i < 2; ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    fd[i] = (d2(a) - d2(b)) / (2 * h);
  }
  CHECK((g - fd).norm() <= 1e-6);
}

TEST_CASE("Neumann bound holds inside the tube") {
  const ManifoldSpec c = catalog::unit_circle();
  for (double r : {0.2, 0.5, 1.5, 1.8}) {
    const Vec x = r * v2(std::cos(0.3), std::sin(0.3));
    const double b = dp_norm_bound(c, x, 0.9);
    CHECK(b == doctest::Approx(1.0 / (1.0 - std::abs(r - 1) / 0.9)));
  }
  CHECK_THROWS_AS(dp_norm_bound(c, v2(0.05, 0), 0.9), PreconditionError);
}

TEST_CASE("errors") {
  const ManifoldSpec c = catalog::unit_circle();
  CHECK_THROWS_AS(dp_formula(c, v2(0, 0)), PreconditionError);
  // Near the centre the formula is fine but every finite-difference probe
  // jumps across it once the step is comparable to |x|.
  CHECK_THROWS_AS(dp_fd(c, v2(1e-6, 0), 1e-5), FootJump);
  // At a centre of curvature the resolvent is singular.
  const ManifoldSpec p = catalog::parabola();
  CHECK_THROWS(dp_formula(p, v2(0, 0.5)));
}
