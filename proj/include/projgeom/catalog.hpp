#pragma once

#include "projgeom/manifold.hpp"

#include <functional>
#include <string>
#include <vector>

/// Built-in manifolds with analytic derivatives. Non-compact entries are
/// truncated to a finite parameter box whose cut faces are flagged.
namespace projgeom::catalog {

/// t in [-pi, pi] -> (cos t, sin t).
ManifoldSpec unit_circle();

/// Sphere of the given radius centred at 0 in R^d, covered by 2d
/// gnomonic "cube" charts over [-1, 1]^(d-1).
ManifoldSpec sphere(double radius, int ambient_dim);

/// origin + sum_i y_i * directions.col(i), |y_i| <= half_length (truncated).
ManifoldSpec affine_subspace(const Vec& origin, const Mat& directions, double half_length);
ManifoldSpec line(const Vec& origin, const Vec& direction, double half_length);

struct ScalarFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

/// {(t, f(t)) : t in [lo, hi]}.
ManifoldSpec graph_curve(std::string name, ScalarFunction fn, double lo, double hi,
                         bool truncated_lo = true, bool truncated_hi = true, int smoothness = 2);

/// graph of t^2 over [-half_width, half_width].
ManifoldSpec parabola(double half_width = 3.0);

/// {(t, t^2) : t >= 0}, cut at t = truncation. The face t = 0 is a genuine end.
ManifoldSpec half_parabola(double truncation = 4.0);

/// Graph of f(x) = int_0^x g, with the piecewise linear, 1-Lipschitz g
/// oscillating on the intervals 2*3^-(j+1) < x <= 2*3^-j (k <= 12).
ManifoldSpec lip1_example(double half_width = 3.0);
double lip1_g(double x);
double lip1_g_slope(double x);  // one-sided (right-continuous piece) derivative of g
double lip1_f(double x);

/// (R + r cos v) (cos u, sin u) + r sin v e_3 over [-pi, pi]^2.
ManifoldSpec torus(double major_radius, double minor_radius);

/// (cos t, sin t, t), t in [-half_length, half_length] (truncated).
ManifoldSpec helix(double half_length = 2.0 * 3.14159265358979323846);

/// Vertical ray {0} x [1, 1+L], quarter arc of the unit circle centred at
/// (1,1), and horizontal ray [1, 1+L] x {0}, joined C^1 by arc length.
ManifoldSpec quarter_circle_with_rays(double ray_length = 5.0);

/// Lines y = +offset and y = -offset in R^2, x in [-half_length, half_length].
ManifoldSpec two_parallel_lines(double offset = 1.0, double half_length = 10.0);

/// Finite point set as a 0-dimensional manifold.
ManifoldSpec point_set(const std::vector<Vec>& points);

}  // namespace projgeom::catalog
