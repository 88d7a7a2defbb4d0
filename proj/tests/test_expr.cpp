#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projgeom/expr.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace projgeom;
using namespace projgeom::expr;
using support::v2;

namespace {

// Richardson-extrapolated central differences of the value.
Vec richardson_grad(const Ast& a, const Vec& y, double h = 1e-3) {
  Vec g(y.size());
  for (int i = 0; i < y.size(); ++i) {
    auto cd = [&](double s) {
      Vec p = y, q = y;
      p[i] += s;
      q[i] -= s;
      return (a.eval(p) - a.eval(q)) / (2 * s);
    };
    g[i] = (4 * cd(h / 2) - cd(h)) / 3;
  }
  return g;
}

Mat richardson_hess(const Ast& a, const Vec& y, double h = 1e-3) {
  const int m = static_cast<int>(y.size());
  Mat H(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      auto cd = [&](double s) {
        auto f = [&](double si, double sj) {
          Vec p = y;
          p[i] += si;
          p[j] += sj;
          return a.eval(p);
        };
        return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4 * s * s);
      };
      H(i, j) = (4 * cd(h / 2) - cd(h)) / 3;
    }
  }
  return H;
}

}  // namespace

TEST_CASE("prefix form of parsed expressions") {
  CHECK(parse("y0^2", 1).to_string() == "pow(param 0, 2)");
  CHECK(parse("sin(y0)*cos(y1)", 2).to_string() == "mul(sin(param 0), cos(param 1))");
  CHECK(parse("1 + 2 * y0", 1).to_string() == "add(1, mul(2, param 0))");
  CHECK(parse("-y0^2", 1).to_string() == "neg(pow(param 0, 2))");
  CHECK(parse("y0 - y0 - y0", 1).to_string() == "sub(sub(param 0, param 0), param 0)");
  CHECK(parse("y0^2^3", 1).to_string() == "pow(pow(param 0, 2), 3)");
  CHECK(parse("y0^-1", 1).to_string() == "pow(param 0, -1)");
  CHECK(parse("(y0 + 1) / 2", 1).to_string() == "div(add(param 0, 1), 2)");
}

TEST_CASE("values") {
  const Vec y = v2(0.7, -1.3);
  CHECK(parse("pi", 2).eval(y) == doctest::Approx(std::numbers::pi));
  CHECK(parse("1.5e-1 * y0 + y1", 2).eval(y) == doctest::Approx(0.15 * 0.7 - 1.3));
  CHECK(parse("-y1^2", 2).eval(y) == doctest::Approx(-(1.3 * 1.3)));
  CHECK(parse("2^3^2", 0).eval(Vec(0)) == doctest::Approx(64.0));
  CHECK(parse("exp(log(y0))", 2).eval(y) == doctest::Approx(0.7));
  CHECK(parse("sqrt(abs(y1))", 2).eval(y) == doctest::Approx(std::sqrt(1.3)));
  CHECK(parse("abs(y0 - y0)", 2).eval(y) == 0.0);
  CHECK(parse("sqrt(0*y0)", 2).eval(y) == 0.0);
}

TEST_CASE("jets match hand-derived derivatives") {
  const Vec y = v2(0.7, -1.3);
  const double a = y[0], b = y[1];
  // f = sin(a) * b^2 + exp(a * b)
  const Ast f = parse("sin(y0) * y1^2 + exp(y0 * y1)", 2);
  const Jet2 j = f.eval_jet2(y);
  const double e = std::exp(a * b);
  CHECK(j.value == doctest::Approx(std::sin(a) * b * b + e));
  CHECK(j.grad[0] == doctest::Approx(std::cos(a) * b * b + b * e));
  CHECK(j.grad[1] == doctest::Approx(2 * std::sin(a) * b + a * e));
  CHECK(j.hess(0, 0) == doctest::Approx(-std::sin(a) * b * b + b * b * e));
  CHECK(j.hess(0, 1) == doctest::Approx(2 * std::cos(a) * b + e + a * b * e));
  CHECK(j.hess(1, 1) == doctest::Approx(2 * std::sin(a) + a * a * e));
  CHECK(j.hess(0, 1) == j.hess(1, 0));

  // g = log(a^2 + 1) / sqrt(a + 2)
  const Ast g = parse("log(y0^2 + 1) / sqrt(y0 + 2)", 2);
  const Jet2 k = g.eval_jet2(y, 1);
  const double u = std::log(a * a + 1), w = std::sqrt(a + 2);
  CHECK(k.grad[0] == doctest::Approx((2 * a / (a * a + 1)) / w - u / (2 * w * w * w)));
  CHECK(k.grad[1] == 0.0);
}

TEST_CASE("jets agree with Richardson differences on random inputs") {
  const std::vector<std::string> exprs = {
      "sin(y0) * cos(y1) + y0^3 - 2*y1",
      "exp(-(y0^2 + y1^2) / 2)",
      "y0 / (1 + y1^2)",
      "sqrt(2 + sin(y0*y1)) * log(3 + y0)",
      "abs(y0 + 5) * y1^-2",
      "(y0 - y1)^4 - cos(pi*y0)",
  };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const std::string& s : exprs) {
    const Ast a = parse(s, 2);
    for (int k = 0; k < 10; ++k) {
      Vec y = v2(u(rng), u(rng));
      if (std::abs(y[1]) < 0.3) y[1] = 0.7;
      const Jet2 j = a.eval_jet2(y);
      CAPTURE(s);
      CHECK((j.grad - richardson_grad(a, y)).norm() <= 1e-7 * (1 + j.grad.norm()));
      CHECK((j.hess - richardson_hess(a, y)).norm() <= 1e-5 * (1 + j.hess.norm()));
      CHECK((j.hess - j.hess.transpose()).norm() <= 1e-14 * (1 + j.hess.norm()));
    }
  }
}

TEST_CASE("syntax errors carry offsets") {
  try {
    parse("y0 + * 2", 1);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(parse("", 1), SyntaxError);
  CHECK_THROWS_AS(parse("(y0", 1), SyntaxError);
  CHECK_THROWS_AS(parse("y0)", 1), SyntaxError);
  CHECK_THROWS_AS(parse("y0^1.5", 1), SyntaxError);
  CHECK_THROWS_AS(parse("y0^y0", 1), SyntaxError);
  CHECK_THROWS_AS(parse("2 $ y0", 1), SyntaxError);
  CHECK_THROWS_AS(parse("sin y0", 1), SyntaxError);
}

TEST_CASE("unknown identifiers") {
  CHECK_THROWS_AS(parse("tan(y0)", 1), UnknownIdentifier);
  CHECK_THROWS_AS(parse("y1", 1), UnknownIdentifier);
  CHECK_THROWS_AS(parse("x", 1), UnknownIdentifier);
}

TEST_CASE("domain errors") {
  const Vec z = Vec::Zero(1);
  CHECK_THROWS_AS(parse("1 / y0", 1).eval(z), DomainError);
  CHECK_THROWS_AS(parse("y0^-2", 1).eval(z), DomainError);
  CHECK_THROWS_AS(parse("log(y0)", 1).eval(z), DomainError);
  CHECK_THROWS_AS(parse("sqrt(y0 - 1)", 1).eval(z), DomainError);
  CHECK_THROWS_AS(parse("sqrt(y0)", 1).eval_jet2(z, 1), DomainError);
  CHECK_THROWS_AS(parse("abs(y0)", 1).eval_jet2(z, 1), DomainError);
  CHECK_THROWS_AS(parse("y0", 1).eval(v2(0, 0)), DimensionMismatch);
}

TEST_CASE("expression charts") {
  const Chart c = expression_chart({"cos(y0)", "sin(y0)"}, 1, Box(Vec::Constant(1, -3), Vec::Constant(1, 3)));
  CHECK(c.ambient_dim() == 2);
  const Vec y = Vec::Constant(1, 0.4);
  CHECK((c.eval(y) - v2(std::cos(0.4), std::sin(0.4))).norm() <= 1e-15);
  CHECK((c.jacobian(y) - v2(-std::sin(0.4), std::cos(0.4))).norm() <= 1e-15);
  const auto H = c.hessian(y);
  CHECK(H[0](0, 0) == doctest::Approx(-std::cos(0.4)));
  CHECK_THROWS_AS(expression_chart({"y0"}, 2, Box(Vec::Zero(1), Vec::Ones(1))), DimensionMismatch);
}
