#include "projgeom/cli.hpp"

#include "projgeom/catalog.hpp"
#include "projgeom/curvature.hpp"
#include "projgeom/derivative.hpp"
#include "projgeom/frontier.hpp"
#include "projgeom/hull.hpp"
#include "projgeom/manifest.hpp"
#include "projgeom/output.hpp"
#include "projgeom/parallel.hpp"
#include "projgeom/skeleton.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

namespace projgeom::cli {

namespace {

using nlohmann::json;
using output::number;

struct Config {
  std::string manifest;
  std::string out;
  double tol = 1e-5;
  double rmax = 4.0;
  int grid = 0;
  std::vector<double> region;
  int jobs = default_jobs();
  std::uint64_t seed = 0;
  bool seed_given = false;

  std::vector<double> point;
  int chart = 0;
  std::vector<double> coords;
  std::vector<double> direction;
  std::vector<double> from;
  std::vector<double> to;
  int count = 20;
  int random_rays = 0;
  int directions = 32;
  int samples = 256;
  double eps0 = 0.0;
  bool classify = false;
  std::string demo;
};

class DemoFailure : public Error {
 public:
  using Error::Error;
};

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Mat& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

json extended_json(const ExtendedReal& e) {
  return e.is_unbounded() ? json("inf") : json(e.value());
}

LoadedManifest load(const Config& c) {
  if (c.manifest.empty()) throw ValidationError("--manifest is required");
  LoadedManifest lm = load_manifest(c.manifest);
  if (c.seed_given) lm.projection.seed = c.seed;
  return lm;
}

FrontierOptions frontier_options(const Config& c, const ProjectionOptions& po) {
  if (!(c.tol > 0.0)) throw ValidationError("--tol must be positive");
  if (!(c.rmax > 0.0)) throw ValidationError("--rmax must be positive");
  FrontierOptions fo;
  fo.r_max = c.rmax;
  fo.tol = c.tol;
  fo.projection = po;
  return fo;
}

GridRegion region_of(const Config& c, int d, int default_grid) {
  if (static_cast<int>(c.region.size()) != 2 * d) {
    throw ValidationError("--region needs " + std::to_string(2 * d) +
                          " numbers: lo_1..lo_d,hi_1..hi_d");
  }
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = c.region[i];
    hi[i] = c.region[d + i];
  }
  const int n = c.grid > 0 ? c.grid : default_grid;
  return GridRegion(lo, hi, n);
}

void write_if(const Config& c, const std::string& name, const std::string& content) {
  if (!c.out.empty()) output::write_file(output::join_path(c.out, name), content);
}

std::vector<std::string> header_vec(const std::string& prefix, int n) {
  std::vector<std::string> h;
  for (int i = 0; i < n; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

void append(std::vector<std::string>& row, const Vec& v) {
  for (int i = 0; i < v.size(); ++i) row.push_back(number(v[i]));
}

NormalRay ray_of(const ManifoldSpec& m, const Config& c) {
  if (c.coords.empty() && m.param_dim() > 0) throw ValidationError("--coords is required");
  if (c.direction.empty()) throw ValidationError("--direction is required");
  return NormalRay::make(m, c.chart, to_vec(c.coords), to_vec(c.direction));
}

std::string frontier_csv(const std::vector<FrontierEstimate>& est, int d) {
  std::ostringstream os;
  output::CsvWriter csv(os);
  std::vector<std::string> h{"index", "chart"};
  for (auto s : header_vec("foot_", d)) h.push_back(s);
  for (auto s : header_vec("dir_", d)) h.push_back(s);
  h.insert(h.end(), {"theta_lo", "theta_hi", "unbounded"});
  csv.row(h);
  for (std::size_t i = 0; i < est.size(); ++i) {
    std::vector<std::string> r{std::to_string(i), std::to_string(est[i].ray.chart_index())};
    append(r, est[i].ray.foot());
    append(r, est[i].ray.direction());
    r.push_back(number(est[i].theta_lo));
    r.push_back(number(est[i].theta_hi));
    r.push_back(est[i].unbounded() ? "1" : "0");
    csv.row(r);
  }
  return os.str();
}

json projection_json(const ProjectionResult& r) {
  json j;
  j["multiplicity"] = to_string(r.multiplicity);
  j["global_distance"] = r.global_distance;
  j["minima"] = json::array();
  for (const LocalMinimum& lm : r.minima) {
    j["minima"].push_back({{"chart_index", lm.chart_index},
                           {"chart_coords", vec_json(lm.chart_coords)},
                           {"point", vec_json(lm.point)},
                           {"distance", lm.distance},
                           {"on_truncation", lm.on_truncation}});
  }
  j["diagnostics"] = {{"starts_used", r.diagnostics.starts_used},
                      {"converged_fraction", r.diagnostics.converged_fraction},
                      {"low_convergence", r.diagnostics.low_convergence}};
  return j;
}

// ------------------------------------------------------------ subcommands

void cmd_project(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  const Vec x = to_vec(c.point);
  json j;
  if (c.classify) {
    const PointClass pc = classify(lm.manifold, x, lm.projection);
    j = projection_json(pc.witness);
    j["label"] = to_string(pc.label);
  } else {
    j = projection_json(project(lm.manifold, x, lm.projection));
  }
  out << j.dump(2) << '\n';
  write_if(c, "project.json", j.dump(2) + "\n");
}

void cmd_frontier(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  const FrontierEstimate e =
      frontier(lm.manifold, ray_of(lm.manifold, c), frontier_options(c, lm.projection));
  json j{{"foot", vec_json(e.ray.foot())},
         {"direction", vec_json(e.ray.direction())},
         {"theta_lo", e.theta_lo},
         {"theta_hi", e.theta_hi},
         {"unbounded_beyond", e.unbounded() ? json(*e.unbounded_beyond) : json(nullptr)},
         {"evaluations", e.trace.size()}};
  out << j.dump(2) << '\n';
  std::ostringstream os;
  output::CsvWriter csv(os);
  csv.row({"r", "foot_agrees"});
  for (const auto& [r, ok] : e.trace) csv.row({number(r), ok ? "1" : "0"});
  write_if(c, "frontier_trace.csv", os.str());
}

void cmd_reach(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  ReachSampling s;
  s.feet_per_dim = c.grid > 0 ? c.grid : 16;
  s.sphere_directions = c.directions;
  s.frontier = frontier_options(c, lm.projection);
  s.jobs = c.jobs;
  const ReachReport rep = reach(lm.manifold, s);
  out << "reach " << rep.reach_estimate.to_string() << '\n';
  out << "rays " << rep.samples.size() << '\n';
  if (rep.argmin >= 0) {
    const FrontierEstimate& e = rep.samples[rep.argmin];
    out << "argmin_foot " << output::vector_text(e.ray.foot()) << '\n';
    out << "argmin_direction " << output::vector_text(e.ray.direction()) << '\n';
  } else {
    out << "unbounded_beyond " << number(s.frontier.r_max) << '\n';
  }
  write_if(c, "reach.csv", frontier_csv(rep.samples, lm.manifold.ambient_dim()));
}

json curvature_json(const ManifoldSpec& m, const NormalRay& ray) {
  const ShapeOperatorReport rep = shape_operator(m, ray);
  const Mat fd = shape_operator_fd_oracle(m, ray);
  json centers = json::array();
  for (const Vec& p : rep.centers) centers.push_back(vec_json(p));
  return {{"foot", vec_json(ray.foot())},
          {"direction", vec_json(ray.direction())},
          {"matrix", mat_json(rep.matrix)},
          {"eigenvalues", vec_json(rep.eigenvalues)},
          {"rho", extended_json(rep.rho)},
          {"centers", centers},
          {"asymmetry", rep.asymmetry},
          {"fd_matrix", mat_json(fd)},
          {"fd_error", (fd - rep.matrix).norm()}};
}

// Uniform random chart point and random unit normal there.
NormalRay random_ray(const ManifoldSpec& m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(m.charts.size()) - 1);
  const int c = pick(rng);
  const Box& box = m.charts[c].domain();
  Vec y(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    y[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
  }
  const Mat n = normal_frame(m.charts[c], y).vectors;
  std::normal_distribution<double> gauss;
  Vec w(n.cols());
  for (int i = 0; i < w.size(); ++i) w[i] = gauss(rng);
  return NormalRay::make(m, c, y, n * w);
}

void cmd_curvature(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  if (c.random_rays <= 0) {
    out << curvature_json(lm.manifold, ray_of(lm.manifold, c)).dump(2) << '\n';
    return;
  }
  std::mt19937_64 rng(c.seed);
  const int d = lm.manifold.ambient_dim();
  std::ostringstream os;
  output::CsvWriter csv(os);
  std::vector<std::string> h{"index", "chart"};
  for (auto s : header_vec("foot_", d)) h.push_back(s);
  for (auto s : header_vec("dir_", d)) h.push_back(s);
  h.insert(h.end(), {"lambda_max", "rho", "fd_error"});
  csv.row(h);
  double worst = 0.0;
  for (int i = 0; i < c.random_rays; ++i) {
    const NormalRay ray = random_ray(lm.manifold, rng);
    const ShapeOperatorReport rep = shape_operator(lm.manifold, ray);
    const double err = (shape_operator_fd_oracle(lm.manifold, ray) - rep.matrix).norm();
    worst = std::max(worst, err);
    std::vector<std::string> r{std::to_string(i), std::to_string(ray.chart_index())};
    append(r, ray.foot());
    append(r, ray.direction());
    r.push_back(number(rep.eigenvalues[0]));
    r.push_back(rep.rho.to_string());
    r.push_back(number(err));
    csv.row(r);
  }
  out << "rays " << c.random_rays << '\n' << "max_fd_error " << number(worst) << '\n';
  write_if(c, "curvature.csv", os.str());
}

void cmd_dpcheck(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  const DpReport rep = dp_check(lm.manifold, to_vec(c.point), c.eps0, lm.projection);
  json j{{"x", vec_json(rep.x)},
         {"foot", vec_json(rep.foot)},
         {"formula_matrix", mat_json(rep.formula_matrix)},
         {"fd_matrix", mat_json(rep.fd_matrix)},
         {"rel_error", rep.rel_error},
         {"grad_delta_squared", vec_json(2.0 * (rep.x - rep.foot))},
         {"norm_bound", extended_json(rep.norm_bound)}};
  out << j.dump(2) << '\n';
  write_if(c, "dpcheck.json", j.dump(2) + "\n");
}

std::string points_csv(const std::vector<Vec>& pts, const std::string& extra_name = "",
                       const std::vector<std::string>& extra = {}) {
  std::ostringstream os;
  output::CsvWriter csv(os);
  const int d = pts.empty() ? 0 : static_cast<int>(pts.front().size());
  std::vector<std::string> h = header_vec("x_", d);
  if (!extra_name.empty()) h.push_back(extra_name);
  csv.row(h);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::string> r;
    append(r, pts[i]);
    if (!extra_name.empty()) r.push_back(extra[i]);
    csv.row(r);
  }
  return os.str();
}

std::string balls_csv(const std::vector<MaximalBall>& balls, int d) {
  std::ostringstream os;
  output::CsvWriter csv(os);
  std::vector<std::string> h = header_vec("center_", d);
  h.insert(h.end(), {"radius", "refined", "witnesses"});
  csv.row(h);
  for (const MaximalBall& b : balls) {
    std::vector<std::string> r;
    append(r, b.center);
    r.push_back(number(b.radius));
    r.push_back(b.refined ? "1" : "0");
    r.push_back(std::to_string(b.witness_feet.size()));
    csv.row(r);
  }
  return os.str();
}

std::vector<Vec> curve_samples(const ManifoldSpec& m, int n) {
  std::vector<Vec> pts;
  for (const ManifoldSample& s : manifold_samples(m, n)) pts.push_back(s.point);
  return pts;
}

std::string overlay_svg(const ManifoldSpec& m, const GridRegion& g,
                        const std::vector<std::pair<std::vector<Vec>, std::string>>& layers) {
  output::SvgPlot svg(g.lo[0], g.hi[0], g.lo[1], g.hi[1]);
  std::vector<Vec> ms;
  for (const Vec& p : curve_samples(m, 2000)) {
    if (p[0] >= g.lo[0] && p[0] <= g.hi[0] && p[1] >= g.lo[1] && p[1] <= g.hi[1]) ms.push_back(p);
  }
  svg.points(ms, "black", 1.0);
  for (const auto& [pts, color] : layers) svg.points(pts, color, 1.5);
  return svg.str();
}

void cmd_skeleton(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  const int d = lm.manifold.ambient_dim();
  const GridRegion g = region_of(c, d, 200);
  const SkeletonCloud cloud = skeleton_sample(lm.manifold, g, lm.projection, c.jobs);
  out << "balls " << cloud.balls.size() << '\n'
      << "skeleton_adjacent " << cloud.skeleton_adjacent.size() << '\n'
      << "truncation_induced " << cloud.truncation_induced.size() << '\n';
  write_if(c, "skeleton.csv", balls_csv(cloud.balls, d));
  write_if(c, "skeleton_adjacent.csv", points_csv(cloud.skeleton_adjacent));
  write_if(c, "truncation_induced.csv", points_csv(cloud.truncation_induced));
  if (d == 2) {
    std::vector<Vec> centers;
    for (const MaximalBall& b : cloud.balls) centers.push_back(b.center);
    write_if(c, "skeleton.svg",
             overlay_svg(lm.manifold, g, {{centers, "crimson"}, {cloud.truncation_induced, "orange"}}));
  }
}

void cmd_recover(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  const int d = lm.manifold.ambient_dim();
  const GridRegion g = region_of(c, d, 200);
  const SkeletonCloud cloud = skeleton_sample(lm.manifold, g, lm.projection, c.jobs);
  const HalfSpaceSet hs = convex_hull_halfspaces(lm.manifold, c.samples);
  std::vector<Vec> pts;
  std::vector<std::string> flags;
  long inside = 0;
  for (long f = 0; f < g.size(); ++f) {
    const Vec x = g.point(f);
    const bool in = medial_recover(cloud, hs, x);
    inside += in;
    pts.push_back(x);
    flags.push_back(in ? "1" : "0");
  }
  out << "grid_points " << g.size() << '\n'
      << "recovered_complement " << inside << '\n'
      << "balls " << cloud.balls.size() << '\n'
      << "halfspaces " << hs.halfspaces.size() << (hs.thickened ? " (thickened)" : "") << '\n';
  write_if(c, "recover.csv", points_csv(pts, "in_complement", flags));
}

ECompReport run_ecomp(const Config& c, const LoadedManifest& lm, const GridRegion& g,
                      std::ostream& out) {
  const ECompReport rep = e_complement_check(lm.manifold, g, lm.projection, c.jobs);
  json j{{"estimate_points", rep.estimate.size()},
         {"decomposition_points", rep.decomposition.size()},
         {"estimate_to_decomposition_cells", rep.estimate_to_decomposition},
         {"decomposition_to_estimate_cells", rep.decomposition_to_estimate},
         {"within_two_cells", rep.within_two_cells},
         {"truncation_induced", rep.cloud.truncation_induced.size()}};
  out << j.dump(2) << '\n';
  std::vector<std::string> labels;
  for (PointLabel l : rep.estimate_labels) labels.push_back(to_string(l));
  write_if(c, "ecomp_estimate.csv", points_csv(rep.estimate, "label", labels));
  write_if(c, "ecomp_decomposition.csv", points_csv(rep.decomposition));
  if (lm.manifold.ambient_dim() == 2) {
    write_if(c, "ecomp.svg",
             overlay_svg(lm.manifold, g, {{rep.estimate, "royalblue"}, {rep.decomposition, "crimson"}}));
  }
  return rep;
}

void cmd_ecomp(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  run_ecomp(c, lm, region_of(c, lm.manifold.ambient_dim(), 200), out);
}

std::vector<NormalRay> profile_rays(const ManifoldSpec& m, int chart, const Vec& from,
                                    const Vec& to, int count, const Vec& direction) {
  if (count < 1) throw ValidationError("--count must be >= 1");
  std::vector<NormalRay> rays;
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const Vec y = from + s * (to - from);
    const Mat n = normal_frame(m.charts.at(chart), y).vectors;
    const Vec v = n * (n.transpose() * direction);
    rays.push_back(NormalRay::make(m, chart, y, v));
  }
  return rays;
}

void cmd_theta_profile(const Config& c, std::ostream& out) {
  const LoadedManifest lm = load(c);
  if (c.direction.empty()) throw ValidationError("--direction is required");
  const std::vector<NormalRay> rays = profile_rays(lm.manifold, c.chart, to_vec(c.from),
                                                   to_vec(c.to), c.count, to_vec(c.direction));
  const auto est = theta_profile(lm.manifold, rays, frontier_options(c, lm.projection), c.jobs);
  for (std::size_t i = 0; i < est.size(); ++i) {
    out << output::vector_text(est[i].ray.foot()) << " theta " << est[i].theta().to_string()
        << '\n';
  }
  write_if(c, "theta_profile.csv", frontier_csv(est, lm.manifold.ambient_dim()));
}

// ------------------------------------------------------------ demos

void check(bool ok, const std::string& what, std::ostream& out, std::vector<std::string>& failed) {
  out << (ok ? "PASS " : "FAIL ") << what << '\n';
  if (!ok) failed.push_back(what);
}

void demo_half_parabola(const Config& c, std::ostream& out) {
  const ManifoldSpec m = catalog::half_parabola();
  ProjectionOptions po;
  po.seed = c.seed;
  std::vector<std::string> failed;
  for (double y : {0.1, 0.25, 0.49}) {
    const ProjectionResult r = project(m, Eigen::Vector2d(0.0, y), po);
    check(r.unique() && r.foot().point.norm() <= 1e-7,
          "p((0," + number(y) + ")) = (0,0): got " + output::vector_text(r.foot().point), out,
          failed);
  }
  {
    // The closed form (sqrt((2y-1)/4), (2y-1)/4) gives (0.5, 0.25) at y = 1, but
    // |(t,t^2)-(0,1)| is minimized at t^2 = 1/2, i.e. at (sqrt(0.5), 0.5).
    const ProjectionResult r = project(m, Eigen::Vector2d(0.0, 1.0), po);
    out << "p((0,1)) minimizer (sqrt(0.5), 0.5): error "
        << number((r.foot().point - Eigen::Vector2d(std::sqrt(0.5), 0.5)).norm()) << '\n';
    check(r.unique() && (r.foot().point - Eigen::Vector2d(0.5, 0.25)).norm() <= 1e-7,
          "p((0,1)) = (0.5,0.25): got " + output::vector_text(r.foot().point), out, failed);
  }
  const NormalRay ray = NormalRay::make(m, 0, Vec::Zero(1), Eigen::Vector2d(0.0, 1.0));
  FrontierOptions fo;
  fo.projection = po;
  fo.tol = 1e-5;
  const FrontierEstimate e = frontier(m, ray, fo);
  out << "theta((0,0),(0,1)) in [" << number(e.theta_lo) << ", " << number(e.theta_hi) << "]\n";
  check(!e.unbounded() && std::abs(e.theta().value() - 0.5) <= 1e-3, "theta = 0.5 +- 1e-3", out,
        failed);

  Config cc = c;
  cc.region = {-3.0, 0.0, 3.0, 5.0};
  const GridRegion g = region_of(cc, 2, 200);
  LoadedManifest lm{m, po};
  const ECompReport rep = run_ecomp(cc, lm, g, out);
  std::vector<Vec> curve;
  for (int k = 0; k <= 4000; ++k) {
    const double x = -3.0 * k / 4000.0;
    curve.emplace_back(Eigen::Vector2d(x, 0.5 * (1.0 + 3.0 * std::cbrt(x * x))));
  }
  const Vec h = g.spacing();
  const double to_curve = one_sided_gap(rep.estimate, curve, h);
  const double from_curve = one_sided_gap(curve, rep.estimate, h);
  out << "estimate_to_curve_cells " << number(to_curve) << '\n'
      << "curve_to_estimate_cells " << number(from_curve) << '\n';
  check(to_curve <= 2.0 && from_curve <= 2.0, "sampled complement within 2 cells of the curve",
        out, failed);
  write_if(cc, "eM_boundary.csv", points_csv(rep.estimate));
  write_if(cc, "eM_curve.csv", points_csv(curve));
  if (!failed.empty()) throw DemoFailure(std::to_string(failed.size()) + " check(s) failed");
}

void demo_lip1(const Config& c, std::ostream& out) {
  const ManifoldSpec m = catalog::lip1_example();
  FrontierOptions fo;
  fo.projection.seed = c.seed;
  fo.r_max = 4.0;
  fo.tol = 1e-4;
  std::vector<NormalRay> rays;
  for (double x : {-0.5, -0.1, -0.01}) {
    rays.push_back(NormalRay::make(m, 0, Vec::Constant(1, x), Eigen::Vector2d(0.0, 1.0)));
  }
  for (int k = 1; k <= 5; ++k) {
    const double x = std::pow(3.0, -2 * k);
    rays.push_back(NormalRay::make(m, 0, Vec::Constant(1, x), Eigen::Vector2d(0.0, 1.0)));
  }
  const auto est = theta_profile(m, rays, fo, c.jobs);
  std::vector<std::string> failed;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double x = est[i].ray.foot()[0];
    const std::string th = est[i].theta().to_string();
    if (i < 3) {
      check(est[i].theta_lo >= 2.0 - 1e-2, "theta((" + number(x) + ",0),(0,1)) = " + th + " >= 2",
            out, failed);
    } else {
      check(est[i].theta_hi <= 0.5 + 1e-2,
            "theta((3^-" + std::to_string(2 * (i - 2)) + ", f),(0,1)) = " + th + " <= 0.5", out,
            failed);
    }
  }
  write_if(c, "theta_profile.csv", frontier_csv(est, 2));

  std::vector<Vec> fpts, gpts;
  for (int k = 0; k <= 3000; ++k) {
    const double x = -0.1 + 1.2 * k / 3000.0;
    fpts.emplace_back(Eigen::Vector2d(x, catalog::lip1_f(x)));
    gpts.emplace_back(Eigen::Vector2d(x, catalog::lip1_g(x)));
  }
  output::SvgPlot fsvg(-0.1, 1.1, -0.05, 0.3);
  fsvg.polyline(fpts, "black");
  fsvg.label(0.0, 0.28, "f");
  write_if(c, "lip1_f.svg", fsvg.str());
  output::SvgPlot gsvg(-0.1, 1.1, -0.4, 0.4);
  gsvg.polyline(gpts, "black");
  gsvg.label(0.0, 0.35, "f' = g");
  write_if(c, "lip1_fprime.svg", gsvg.str());
  if (!failed.empty()) throw DemoFailure(std::to_string(failed.size()) + " check(s) failed");
}

void demo_voronoi(const Config& c, std::ostream& out) {
  const std::vector<Vec> sites = {Eigen::Vector2d(-1.0, -0.5), Eigen::Vector2d(1.0, -0.7),
                                  Eigen::Vector2d(0.2, 1.0), Eigen::Vector2d(-0.6, 0.8),
                                  Eigen::Vector2d(0.9, 0.6)};
  const ManifoldSpec m = catalog::point_set(sites);
  ProjectionOptions po;
  po.seed = c.seed;
  Config cc = c;
  cc.region = {-2.0, -2.0, 2.0, 2.0};
  const GridRegion g = region_of(cc, 2, 200);
  const SkeletonCloud cloud = skeleton_sample(m, g, po, c.jobs);
  std::vector<std::string> failed;
  double worst = 0.0;
  for (const MaximalBall& b : cloud.balls) {
    // Distance to the nearest and second-nearest site.
    std::vector<double> d;
    for (const Vec& s : sites) d.push_back((s - b.center).norm());
    std::sort(d.begin(), d.end());
    worst = std::max(worst, d[1] - d[0]);
  }
  out << "skeleton_points " << cloud.balls.size() << '\n'
      << "max_equidistance_gap " << number(worst) << '\n';
  check(!cloud.balls.empty() && worst <= 0.05 * g.spacing().minCoeff(),
        "skeleton points lie on Voronoi cell boundaries", out, failed);
  std::vector<Vec> centers;
  for (const MaximalBall& b : cloud.balls) centers.push_back(b.center);
  write_if(c, "voronoi.csv", balls_csv(cloud.balls, 2));
  output::SvgPlot svg(-2, 2, -2, 2);
  svg.points(centers, "crimson", 1.2);
  svg.points(sites, "black", 3.0);
  write_if(c, "voronoi.svg", svg.str());
  if (!failed.empty()) throw DemoFailure(std::to_string(failed.size()) + " check(s) failed");
}

void cmd_demo(const Config& c, std::ostream& out) {
  if (c.demo == "half-parabola") return demo_half_parabola(c, out);
  if (c.demo == "lip1-theta") return demo_lip1(c, out);
  if (c.demo == "voronoi") return demo_voronoi(c, out);
  throw ValidationError("unknown demo '" + c.demo + "' (half-parabola, lip1-theta, voronoi)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Metric projection onto parametrized submanifolds"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  auto common = [&](CLI::App* s, bool manifest) {
    auto* opt = s->add_option("--manifest", c.manifest, "Manifold manifest (JSON)");
    if (manifest) opt->required();
    s->add_option("--out", c.out, "Output directory for CSV/JSON/SVG artifacts");
    s->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    s->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { c.seed = v, c.seed_given = true; },
        "Seed for quasi-random starts and sampling");
  };
  auto frontier_opts = [&](CLI::App* s) {
    s->add_option("--tol", c.tol, "Bisection tolerance");
    s->add_option("--rmax", c.rmax, "Largest radius probed along a ray");
  };
  auto ray_opts = [&](CLI::App* s) {
    s->add_option("--chart", c.chart, "Chart index");
    s->add_option("--coords", c.coords, "Chart coordinates of the foot")->delimiter(',');
    s->add_option("--direction", c.direction, "Normal direction")->delimiter(',')->required();
  };

  auto* project_cmd = app.add_subcommand("project", "Nearest points of a point");
  common(project_cmd, true);
  project_cmd->add_option("--point", c.point, "Ambient point")->delimiter(',')->required();
  project_cmd->add_flag("--classify", c.classify, "Also classify the point");

  auto* frontier_cmd = app.add_subcommand("frontier", "Frontier function along one normal ray");
  common(frontier_cmd, true);
  frontier_opts(frontier_cmd);
  ray_opts(frontier_cmd);

  auto* reach_cmd = app.add_subcommand("reach", "Reach as the minimum of sampled frontiers");
  common(reach_cmd, true);
  frontier_opts(reach_cmd);
  reach_cmd->add_option("--grid", c.grid, "Feet per parameter axis and chart");
  reach_cmd->add_option("--directions", c.directions, "Normal directions in codimension 3");

  auto* curv_cmd = app.add_subcommand("curvature", "Shape operator along a normal ray");
  common(curv_cmd, true);
  curv_cmd->add_option("--chart", c.chart, "Chart index");
  curv_cmd->add_option("--coords", c.coords, "Chart coordinates of the foot")->delimiter(',');
  curv_cmd->add_option("--direction", c.direction, "Normal direction")->delimiter(',');
  curv_cmd->add_option("--random", c.random_rays, "Check N random rays against the FD oracle");

  auto* dp_cmd = app.add_subcommand("dpcheck", "Derivative of the projection: formula vs FD");
  common(dp_cmd, true);
  dp_cmd->add_option("--point", c.point, "Ambient point")->delimiter(',')->required();
  dp_cmd->add_option("--eps0", c.eps0, "Tube radius for the norm bound (0: skip)");

  for (auto [name, help] : {std::pair{"skeleton", "Sample maximal-ball centres on a grid"},
                            std::pair{"recover", "Medial-axis recovery of the complement"},
                            std::pair{"ecomp", "Compare the sampled complement of E(M) with "
                                               "skeleton and truncation points"}}) {
    auto* s = app.add_subcommand(name, help);
    common(s, true);
    s->add_option("--region", c.region, "lo_1,..,lo_d,hi_1,..,hi_d")->delimiter(',')->required();
    s->add_option("--grid", c.grid, "Grid points per axis");
    if (std::string(name) == "recover") {
      s->add_option("--samples", c.samples, "Manifold samples for the convex hull");
    }
  }

  auto* prof_cmd = app.add_subcommand("theta-profile", "Frontier along a segment of feet");
  common(prof_cmd, true);
  frontier_opts(prof_cmd);
  prof_cmd->add_option("--chart", c.chart, "Chart index");
  prof_cmd->add_option("--from", c.from, "First chart coordinates")->delimiter(',')->required();
  prof_cmd->add_option("--to", c.to, "Last chart coordinates")->delimiter(',')->required();
  prof_cmd->add_option("--count", c.count, "Number of feet");
  prof_cmd->add_option("--direction", c.direction, "Direction projected to each normal space")
      ->delimiter(',')
      ->required();

  auto* demo_cmd = app.add_subcommand("demo", "Worked examples");
  common(demo_cmd, false);
  demo_cmd->add_option("name", c.demo, "half-parabola | lip1-theta | voronoi")->required();
  demo_cmd->add_option("--grid", c.grid, "Grid points per axis");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*project_cmd) cmd_project(c, out);
    else if (*frontier_cmd) cmd_frontier(c, out);
    else if (*reach_cmd) cmd_reach(c, out);
    else if (*curv_cmd) cmd_curvature(c, out);
    else if (*dp_cmd) cmd_dpcheck(c, out);
    else if (*prof_cmd) cmd_theta_profile(c, out);
    else if (*demo_cmd) cmd_demo(c, out);
    else if (app.got_subcommand("skeleton")) cmd_skeleton(c, out);
    else if (app.got_subcommand("recover")) cmd_recover(c, out);
    else if (app.got_subcommand("ecomp")) cmd_ecomp(c, out);
  } catch (const DemoFailure& e) {
    err << "demo: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace projgeom::cli
