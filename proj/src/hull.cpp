#include "projgeom/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace projgeom {

bool HalfSpaceSet::outside(const Vec& z, double tol) const {
  for (const HalfSpace& h : halfspaces) {
    if (h.normal.dot(z) > h.offset + tol) return true;
  }
  return false;
}

namespace {

double extent(const std::vector<Vec>& pts) {
  double e = 0.0;
  for (const Vec& p : pts) e = std::max(e, (p - pts.front()).norm());
  return e;
}

HalfSpaceSet hull2(const std::vector<Vec>& points) {
  std::vector<std::array<double, 2>> p;
  for (const Vec& v : points) p.push_back({v[0], v[1]});
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const double e = 1.0 + extent(points);
  const double area_tol = 1e-14 * e * e;
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= area_tol) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= area_tol) --k;
    h[k++] = p[i];
  }
  if (k < 4) throw DegenerateHull("convex hull: points are collinear");
  h.resize(k - 1);  // counter-clockwise, last point repeated the first
  HalfSpaceSet out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    Vec n(2);
    n << b[1] - a[1], -(b[0] - a[0]);  // right normal of a ccw edge points outward
    n /= n.norm();
    out.halfspaces.push_back({n, n[0] * a[0] + n[1] * a[1]});
  }
  return out;
}

struct Face {
  std::array<int, 3> v;
  Eigen::Vector3d n;
  double off;
  bool alive = true;
};

HalfSpaceSet hull3(const std::vector<Vec>& points) {
  std::vector<Eigen::Vector3d> p;
  for (const Vec& v : points) p.emplace_back(v[0], v[1], v[2]);
  const double eps = 1e-12 * (1.0 + extent(points));
  const int n = static_cast<int>(p.size());

  // Initial tetrahedron from extreme, affinely independent points.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = (p[i] - p[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0) throw DegenerateHull("convex hull: points coincide");
  best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = (p[i1] - p[i0]).cross(p[i] - p[i0]).norm() / (p[i1] - p[i0]).norm();
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0) throw DegenerateHull("convex hull: points are collinear");
  const Eigen::Vector3d pn = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
  best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(pn.dot(p[i] - p[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0) throw DegenerateHull("convex hull: points are coplanar");
  const Eigen::Vector3d inside = 0.25 * (p[i0] + p[i1] + p[i2] + p[i3]);

  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c) {
    Eigen::Vector3d nn = (p[b] - p[a]).cross(p[c] - p[a]);
    Face f{{a, b, c}, nn.normalized(), 0.0};
    if (f.n.dot(inside - p[a]) > 0) {
      std::swap(f.v[1], f.v[2]);
      f.n = -f.n;
    }
    f.off = f.n.dot(p[a]);
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].alive && faces[f].n.dot(p[i]) - faces[f].off > eps) visible.push_back(f);
    }
    if (visible.empty()) continue;
    // Directed edges of visible faces; horizon edges have no reversed twin.
    std::map<std::pair<int, int>, int> edges;
    for (int f : visible) {
      for (int e = 0; e < 3; ++e) edges[{faces[f].v[e], faces[f].v[(e + 1) % 3]}]++;
      faces[f].alive = false;
    }
    for (const auto& [edge, count] : edges) {
      if (edges.count({edge.second, edge.first})) continue;
      add_face(edge.first, edge.second, i);
    }
  }
  HalfSpaceSet out;
  for (const Face& f : faces) {
    if (!f.alive) continue;
    out.halfspaces.push_back({Vec(f.n), f.off});
  }
  return out;
}

// Adds +-eps copies along directions orthogonal to the affine hull of pts.
std::vector<Vec> thicken(const std::vector<Vec>& pts, double eps) {
  const int d = static_cast<int>(pts.front().size());
  Mat diffs(d, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) diffs.col(i) = pts[i] - pts.front();
  Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeFullU);
  const Vec s = svd.singularValues();
  const double tol = 1e-10 * (1.0 + (s.size() ? s[0] : 0.0));
  std::vector<Vec> out = pts;
  for (int k = 0; k < d; ++k) {
    if (k < s.size() && s[k] > tol) continue;
    const Vec dir = svd.matrixU().col(k);
    for (const Vec& p : pts) {
      out.push_back(p + eps * dir);
      out.push_back(p - eps * dir);
    }
  }
  return out;
}

}  // namespace

HalfSpaceSet convex_hull_halfspaces(const std::vector<Vec>& points) {
  if (points.empty()) throw DegenerateHull("convex hull: no points");
  const int d = static_cast<int>(points.front().size());
  for (const Vec& p : points) {
    if (p.size() != d) throw DimensionMismatch("convex hull: mixed dimensions");
  }
  if (d == 2) return hull2(points);
  if (d == 3) return hull3(points);
  throw PreconditionError("convex hull: only d = 2 or 3 is supported");
}

std::vector<ManifoldSample> manifold_samples(const ManifoldSpec& manifold, int n_samples) {
  const int charts = static_cast<int>(manifold.charts.size());
  const int m = manifold.param_dim();
  std::vector<ManifoldSample> out;
  if (m == 0) {
    for (int c = 0; c < charts; ++c) out.push_back({c, Vec(0), manifold.charts[c].eval(Vec(0))});
    return out;
  }
  const double per_chart = std::max(1.0, static_cast<double>(n_samples) / charts);
  const int k = std::max(1, static_cast<int>(std::lround(std::pow(per_chart, 1.0 / m))));
  for (int c = 0; c < charts; ++c) {
    const Box& box = manifold.charts[c].domain();
    long total = 1;
    for (int i = 0; i < m; ++i) total *= k;
    for (long idx = 0; idx < total; ++idx) {
      Vec y(m);
      long rem = idx;
      for (int i = 0; i < m; ++i) {
        y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * ((rem % k) + 0.5) / k;
        rem /= k;
      }
      out.push_back({c, y, manifold.charts[c].eval(y)});
    }
  }
  return out;
}

namespace {

// Local maximum of <psi(y), u> over the chart box, by projected Newton /
// gradient ascent from y.
double support_ascent(const Chart& chart, Vec y, const Vec& u) {
  const Box& box = chart.domain();
  ChartJet jet;
  chart.jet(y, 2, jet);
  double val = jet.value.dot(u);
  for (int it = 0; it < 100; ++it) {
    const Vec g = jet.jacobian.transpose() * u;
    Mat h = Mat::Zero(y.size(), y.size());
    if (chart.has_hessian()) {
      for (int k = 0; k < u.size(); ++k) h += u[k] * jet.hessians[k];
    }
    Vec step;
    Eigen::LLT<Mat> llt(-h);
    if (llt.info() == Eigen::Success) {
      step = llt.solve(g);
    } else {
      step = g * (0.1 * std::max(1e-6, box.width().maxCoeff()) / std::max(1e-300, g.norm()));
    }
    bool improved = false;
    for (int back = 0; back < 40; ++back) {
      const Vec yn = box.clamp(y + step);
      ChartJet trial;
      chart.jet(yn, 2, trial);
      const double vn = trial.value.dot(u);
      if (vn > val) {
        y = yn;
        val = vn;
        jet = std::move(trial);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved || step.norm() <= 1e-14 * (1.0 + y.norm())) break;
  }
  return val;
}

}  // namespace

HalfSpaceSet convex_hull_halfspaces(const ManifoldSpec& manifold, int n_samples) {
  const std::vector<ManifoldSample> samples = manifold_samples(manifold, n_samples);
  std::vector<Vec> pts;
  for (const ManifoldSample& s : samples) pts.push_back(s.point);
  HalfSpaceSet hs;
  try {
    hs = convex_hull_halfspaces(pts);
  } catch (const DegenerateHull&) {
    hs = convex_hull_halfspaces(thicken(pts, 1e-9));
    hs.thickened = true;
  }
  if (manifold.param_dim() == 0) return hs;
  for (HalfSpace& h : hs.halfspaces) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].point.dot(h.normal) > samples[best].point.dot(h.normal)) best = i;
    }
    const ManifoldSample& s = samples[best];
    h.offset = std::max(h.offset,
                        support_ascent(manifold.charts[s.chart_index], s.chart_coords, h.normal));
  }
  return hs;
}

}  // namespace projgeom
