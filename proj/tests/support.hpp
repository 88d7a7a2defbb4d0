#pragma once

// Reference computations that share no code with the library.

#include "projgeom/manifold.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace support {

using projgeom::Mat;
using projgeom::Vec;

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// Nearest point of a parametrized plane curve by dense sampling followed by
// golden-section refinement of the best bracket.
struct CurveFoot {
  double t;
  double distance;
};

inline CurveFoot nearest_on_curve(const std::function<Vec(double)>& curve, double lo, double hi,
                                  const Vec& x, int samples = 20001) {
  double best_t = lo, best = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double t = lo + i * h;
    const double d = (curve(t) - x).norm();
    if (d < best) best = d, best_t = t;
  }
  double a = std::max(lo, best_t - h), b = std::min(hi, best_t + h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double t) { return (curve(t) - x).squaredNorm(); };
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  const double t = 0.5 * (a + b);
  return {t, (curve(t) - x).norm()};
}

// Signed curvature of a graph y = f(x): f'' / (1 + f'^2)^(3/2).
inline double graph_curvature(double fp, double fpp) {
  return fpp / std::pow(1.0 + fp * fp, 1.5);
}

// Sup-inf Hausdorff distance between unit circles of two planes (or lines)
// spanned by the columns of a and b, by sampling the unit sphere of a.
inline double sampled_sphere_hausdorff(const Mat& a, const Mat& b, int samples = 4000) {
  auto one_sided = [samples](const Mat& p, const Mat& q) {
    const Mat qq = q * (q.transpose() * q).inverse() * q.transpose();
    double worst = 0.0;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int s = 0; s < samples; ++s) {
      Vec c(p.cols());
      for (int i = 0; i < c.size(); ++i) c[i] = p.cols() == 1 ? 1.0 - 2.0 * (s % 2) : n(rng);
      Vec u = p * c;
      u.normalize();
      // Nearest point of the unit sphere of span(q) to u is the normalized projection.
      Vec w = qq * u;
      const double d = w.norm() < 1e-15 ? std::sqrt(2.0) : (u - w.normalized()).norm();
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace support
