#include "projgeom/catalog.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace projgeom::catalog {

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Box box1(double lo, double hi, bool tlo, bool thi) {
  Box b(vec1(lo), vec1(hi));
  b.truncated_lo[0] = tlo;
  b.truncated_hi[0] = thi;
  return b;
}

// Parametrized plane curve with analytic first and second derivatives.
Chart plane_curve(Box box, std::function<void(double, Eigen::Vector2d&, Eigen::Vector2d&,
                                               Eigen::Vector2d&)> fn) {
  return Chart::analytic(1, 2, std::move(box),
                         [fn](const Vec& y, int order, ChartJet& out) {
                           Eigen::Vector2d p, dp, ddp;
                           fn(y[0], p, dp, ddp);
                           out.value = p;
                           if (order >= 1) out.jacobian = dp;
                           if (order >= 2) {
                             out.hessians.assign(2, Mat(1, 1));
                             out.hessians[0](0, 0) = ddp[0];
                             out.hessians[1](0, 0) = ddp[1];
                           }
                         });
}

// ---- lip1 pieces: g(x) = slope * x + intercept on (lo, hi]
struct Piece {
  double lo, hi, slope, intercept, f_at_lo;
};

std::vector<Piece> build_lip1_pieces() {
  constexpr int kMaxK = 12;
  std::vector<Piece> pieces;
  auto p3 = [](int e) { return std::pow(3.0, -e); };
  pieces.push_back({0.0, 2.0 * p3(2 * (kMaxK + 1)), 0.0, 0.0, 0.0});
  for (int k = kMaxK; k >= 0; --k) {
    // 3^-(2k+1) - x on (2*3^-2(k+1), 2*3^-(2k+1)]
    pieces.push_back({2.0 * p3(2 * (k + 1)), 2.0 * p3(2 * k + 1), -1.0, p3(2 * k + 1), 0.0});
    if (k >= 1) {
      // x - 3^-2k on (2*3^-(2k+1), 2*3^-2k]
      pieces.push_back({2.0 * p3(2 * k + 1), 2.0 * p3(2 * k), 1.0, -p3(2 * k), 0.0});
    } else {
      // x - 1 on (2/3, 1]; g = 0 beyond 1.
      pieces.push_back({2.0 / 3.0, 1.0, 1.0, -1.0, 0.0});
    }
  }
  double acc = 0.0;
  for (Piece& p : pieces) {
    p.f_at_lo = acc;
    acc += 0.5 * p.slope * (p.hi * p.hi - p.lo * p.lo) + p.intercept * (p.hi - p.lo);
  }
  return pieces;
}

const std::vector<Piece>& lip1_pieces() {
  static const std::vector<Piece> pieces = build_lip1_pieces();
  return pieces;
}

const Piece* lip1_piece(double x) {
  if (x <= 0.0 || x > 1.0) return nullptr;
  for (const Piece& p : lip1_pieces()) {
    if (x > p.lo && x <= p.hi) return &p;
  }
  return nullptr;
}

}  // namespace

double lip1_g(double x) {
  const Piece* p = lip1_piece(x);
  return p ? p->slope * x + p->intercept : 0.0;
}

double lip1_g_slope(double x) {
  const Piece* p = lip1_piece(x);
  return p ? p->slope : 0.0;
}

double lip1_f(double x) {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) x = 1.0;
  const Piece* p = lip1_piece(x);
  return p->f_at_lo + 0.5 * p->slope * (x * x - p->lo * p->lo) + p->intercept * (x - p->lo);
}

ManifoldSpec unit_circle() {
  std::vector<Chart> charts;
  charts.push_back(plane_curve(box1(-kPi, kPi, true, true),
                               [](double t, Eigen::Vector2d& p, Eigen::Vector2d& dp,
                                  Eigen::Vector2d& ddp) {
                                 const double c = std::cos(t), s = std::sin(t);
                                 p << c, s;
                                 dp << -s, c;
                                 ddp << -c, -s;
                               }));
  return ManifoldSpec("unit_circle", std::move(charts), 3);
}

ManifoldSpec sphere(double radius, int ambient_dim) {
  const int d = ambient_dim;
  if (d < 2) throw ValidationError("sphere: ambient dimension must be >= 2");
  if (!(radius > 0.0)) throw ValidationError("sphere: radius must be positive");
  const int m = d - 1;
  std::vector<Chart> charts;
  for (int axis = 0; axis < d; ++axis) {
    for (double sign : {1.0, -1.0}) {
      std::vector<int> index;  // u index fed by parameter j
      for (int k = 0; k < d; ++k) {
        if (k != axis) index.push_back(k);
      }
      auto jet = [=](const Vec& y, int order, ChartJet& out) {
        Vec u(d);
        u[axis] = sign;
        for (int j = 0; j < m; ++j) u[index[j]] = y[j];
        const double n = u.norm();
        const double n3 = n * n * n;
        const double n5 = n3 * n * n;
        out.value = radius * u / n;
        if (order >= 1) {
          out.jacobian.resize(d, m);
          for (int j = 0; j < m; ++j) {
            const int i = index[j];
            for (int k = 0; k < d; ++k) {
              out.jacobian(k, j) = radius * ((k == i ? 1.0 / n : 0.0) - u[k] * u[i] / n3);
            }
          }
        }
        if (order >= 2) {
          out.hessians.assign(d, Mat(m, m));
          for (int k = 0; k < d; ++k) {
            for (int a = 0; a < m; ++a) {
              for (int b = 0; b < m; ++b) {
                const int i = index[a], j = index[b];
                double v = 3.0 * u[k] * u[i] * u[j] / n5;
                if (k == i) v -= u[j] / n3;
                if (k == j) v -= u[i] / n3;
                if (i == j) v -= u[k] / n3;
                out.hessians[k](a, b) = radius * v;
              }
            }
          }
        }
      };
      charts.push_back(
          Chart::analytic(m, d, Box(Vec::Constant(m, -1.0), Vec::Constant(m, 1.0), true), jet));
    }
  }
  return ManifoldSpec("sphere", std::move(charts), 3);
}

ManifoldSpec affine_subspace(const Vec& origin, const Mat& directions, double half_length) {
  const int d = static_cast<int>(origin.size());
  const int m = static_cast<int>(directions.cols());
  if (directions.rows() != d) throw DimensionMismatch("affine_subspace: direction size");
  if (m < 1 || m >= d) throw ValidationError("affine_subspace: need 1 <= m < d");
  auto jet = [origin, directions, d, m](const Vec& y, int order, ChartJet& out) {
    out.value = origin + directions * y;
    if (order >= 1) out.jacobian = directions;
    if (order >= 2) out.hessians.assign(d, Mat::Zero(m, m));
  };
  std::vector<Chart> charts;
  charts.push_back(Chart::analytic(
      m, d, Box(Vec::Constant(m, -half_length), Vec::Constant(m, half_length), true), jet));
  return ManifoldSpec(m == 1 ? "line" : "affine_subspace", std::move(charts), 3);
}

ManifoldSpec line(const Vec& origin, const Vec& direction, double half_length) {
  return affine_subspace(origin, direction.normalized(), half_length);
}

ManifoldSpec graph_curve(std::string name, ScalarFunction fn, double lo, double hi,
                         bool truncated_lo, bool truncated_hi, int smoothness) {
  std::vector<Chart> charts;
  charts.push_back(plane_curve(box1(lo, hi, truncated_lo, truncated_hi),
                               [fn](double t, Eigen::Vector2d& p, Eigen::Vector2d& dp,
                                    Eigen::Vector2d& ddp) {
                                 p << t, fn.f(t);
                                 dp << 1.0, fn.df(t);
                                 ddp << 0.0, fn.d2f(t);
                               }));
  return ManifoldSpec(std::move(name), std::move(charts), smoothness);
}

ManifoldSpec parabola(double half_width) {
  return graph_curve("parabola",
                     {[](double t) { return t * t; }, [](double t) { return 2.0 * t; },
                      [](double) { return 2.0; }},
                     -half_width, half_width, true, true, 3);
}

ManifoldSpec half_parabola(double truncation) {
  return graph_curve("half_parabola",
                     {[](double t) { return t * t; }, [](double t) { return 2.0 * t; },
                      [](double) { return 2.0; }},
                     0.0, truncation, false, true, 3);
}

ManifoldSpec lip1_example(double half_width) {
  return graph_curve("lip1_example", {lip1_f, lip1_g, lip1_g_slope}, -half_width, half_width,
                     true, true, 1);
}

ManifoldSpec torus(double R, double r) {
  if (!(R > r && r > 0.0)) throw ValidationError("torus: need R > r > 0");
  auto jet = [R, r](const Vec& y, int order, ChartJet& out) {
    const double cu = std::cos(y[0]), su = std::sin(y[0]);
    const double cv = std::cos(y[1]), sv = std::sin(y[1]);
    const double w = R + r * cv;
    out.value.resize(3);
    out.value << w * cu, w * su, r * sv;
    if (order >= 1) {
      out.jacobian.resize(3, 2);
      out.jacobian << -w * su, -r * sv * cu,  //
          w * cu, -r * sv * su,               //
          0.0, r * cv;
    }
    if (order >= 2) {
      out.hessians.assign(3, Mat(2, 2));
      out.hessians[0] << -w * cu, r * sv * su, r * sv * su, -r * cv * cu;
      out.hessians[1] << -w * su, -r * sv * cu, -r * sv * cu, -r * cv * su;
      out.hessians[2] << 0.0, 0.0, 0.0, -r * sv;
    }
  };
  std::vector<Chart> charts;
  charts.push_back(
      Chart::analytic(2, 3, Box(Vec::Constant(2, -kPi), Vec::Constant(2, kPi), true), jet));
  return ManifoldSpec("torus", std::move(charts), 3);
}

ManifoldSpec helix(double half_length) {
  auto jet = [](const Vec& y, int order, ChartJet& out) {
    const double c = std::cos(y[0]), s = std::sin(y[0]);
    out.value.resize(3);
    out.value << c, s, y[0];
    if (order >= 1) {
      out.jacobian.resize(3, 1);
      out.jacobian << -s, c, 1.0;
    }
    if (order >= 2) {
      out.hessians.assign(3, Mat(1, 1));
      out.hessians[0](0, 0) = -c;
      out.hessians[1](0, 0) = -s;
      out.hessians[2](0, 0) = 0.0;
    }
  };
  std::vector<Chart> charts;
  charts.push_back(Chart::analytic(1, 3, box1(-half_length, half_length, true, true), jet));
  return ManifoldSpec("helix", std::move(charts), 3);
}

ManifoldSpec quarter_circle_with_rays(double ray_length) {
  const double L = ray_length;
  std::vector<Chart> charts;
  charts.push_back(plane_curve(box1(-L, 0.5 * kPi + L, true, true),
                               [](double s, Eigen::Vector2d& p, Eigen::Vector2d& dp,
                                  Eigen::Vector2d& ddp) {
                                 if (s < 0.0) {
                                   p << 0.0, 1.0 - s;
                                   dp << 0.0, -1.0;
                                   ddp << 0.0, 0.0;
                                 } else if (s <= 0.5 * kPi) {
                                   p << 1.0 - std::cos(s), 1.0 - std::sin(s);
                                   dp << std::sin(s), -std::cos(s);
                                   ddp << std::cos(s), std::sin(s);
                                 } else {
                                   p << 1.0 + (s - 0.5 * kPi), 0.0;
                                   dp << 1.0, 0.0;
                                   ddp << 0.0, 0.0;
                                 }
                               }));
  return ManifoldSpec("quarter_circle_with_rays", std::move(charts), 1);
}

ManifoldSpec two_parallel_lines(double offset, double half_length) {
  std::vector<Chart> charts;
  for (double level : {offset, -offset}) {
    charts.push_back(plane_curve(box1(-half_length, half_length, true, true),
                                 [level](double t, Eigen::Vector2d& p, Eigen::Vector2d& dp,
                                         Eigen::Vector2d& ddp) {
                                   p << t, level;
                                   dp << 1.0, 0.0;
                                   ddp << 0.0, 0.0;
                                 }));
  }
  return ManifoldSpec("two_parallel_lines", std::move(charts), 3);
}

ManifoldSpec point_set(const std::vector<Vec>& points) {
  if (points.empty()) throw ValidationError("point_set: no points");
  std::vector<Chart> charts;
  for (const Vec& p : points) charts.push_back(Chart::point(p));
  return ManifoldSpec("point_set", std::move(charts), 3);
}

}  // namespace projgeom::catalog
