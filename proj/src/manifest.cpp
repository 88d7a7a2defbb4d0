#include "projgeom/manifest.hpp"

#include "projgeom/catalog.hpp"
#include "projgeom/expr.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace projgeom {

namespace {

using nlohmann::json;

double number(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw ManifestError(std::string("parameter '") + key + "' must be a number");
  return params[key].get<double>();
}

Vec vector_of(const json& j, const std::string& what) {
  if (!j.is_array()) throw ManifestError(what + " must be an array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ManifestError(what + " must be an array of numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

std::vector<bool> flags_of(const json& domain, const char* key, std::size_t n) {
  if (!domain.contains(key)) return std::vector<bool>(n, false);
  const json& j = domain[key];
  if (j.is_boolean()) return std::vector<bool>(n, j.get<bool>());
  if (!j.is_array() || j.size() != n) {
    throw ManifestError(std::string("domain.") + key + " must be a boolean or an array of length m");
  }
  std::vector<bool> out;
  for (const json& b : j) {
    if (!b.is_boolean()) throw ManifestError(std::string("domain.") + key + " entries must be booleans");
    out.push_back(b.get<bool>());
  }
  return out;
}

Box box_of(const json& domain, int m) {
  if (!domain.is_object() || !domain.contains("lo") || !domain.contains("hi")) {
    throw ManifestError("chart domain needs 'lo' and 'hi'");
  }
  const Vec lo = vector_of(domain["lo"], "domain.lo");
  const Vec hi = vector_of(domain["hi"], "domain.hi");
  if (lo.size() != m || hi.size() != m) throw ManifestError("domain dimension != param_dim");
  if (!lo.allFinite() || !hi.allFinite()) throw ManifestError("domain bounds must be finite");
  for (int i = 0; i < m; ++i) {
    if (!(lo[i] <= hi[i])) throw ManifestError("domain has lo > hi");
  }
  Box box(lo, hi);
  box.truncated_lo = flags_of(domain, "truncated_lo", m);
  box.truncated_hi = flags_of(domain, "truncated_hi", m);
  return box;
}

ManifoldSpec builtin_from_json(const std::string& key, const json& params) {
  if (!params.is_object()) throw ManifestError("builtin params must be an object");
  if (key == "circle" || key == "unit_circle") return catalog::unit_circle();
  if (key == "sphere") {
    const double d = number(params, "ambient_dim", 3);
    if (d != std::floor(d) || d < 2) throw ManifestError("sphere.ambient_dim must be an integer >= 2");
    const double r = number(params, "radius", 1.0);
    if (!(r > 0)) throw ManifestError("sphere.radius must be positive");
    return catalog::sphere(r, static_cast<int>(d));
  }
  if (key == "torus") {
    const double big = number(params, "major_radius", 2.0);
    const double small = number(params, "minor_radius", 0.5);
    if (!(small > 0 && big > small)) throw ManifestError("torus needs major_radius > minor_radius > 0");
    return catalog::torus(big, small);
  }
  if (key == "parabola") return catalog::parabola(number(params, "half_width", 3.0));
  if (key == "half_parabola") return catalog::half_parabola(number(params, "truncation", 4.0));
  if (key == "lip1") return catalog::lip1_example(number(params, "half_width", 3.0));
  if (key == "helix") return catalog::helix(number(params, "half_length", 2.0 * M_PI));
  if (key == "quarter_circle_with_rays") {
    return catalog::quarter_circle_with_rays(number(params, "ray_length", 5.0));
  }
  if (key == "two_parallel_lines") {
    return catalog::two_parallel_lines(number(params, "offset", 1.0),
                                       number(params, "half_length", 10.0));
  }
  if (key == "line") {
    if (!params.contains("origin") || !params.contains("direction")) {
      throw ManifestError("line needs origin and direction");
    }
    return catalog::line(vector_of(params["origin"], "line.origin"),
                         vector_of(params["direction"], "line.direction"),
                         number(params, "half_length", 10.0));
  }
  if (key == "affine_subspace") {
    if (!params.contains("origin") || !params.contains("directions") ||
        !params["directions"].is_array() || params["directions"].empty()) {
      throw ManifestError("affine_subspace needs origin and a nonempty directions list");
    }
    const Vec origin = vector_of(params["origin"], "affine_subspace.origin");
    Mat dirs(origin.size(), params["directions"].size());
    for (std::size_t j = 0; j < params["directions"].size(); ++j) {
      const Vec v = vector_of(params["directions"][j], "affine_subspace.directions");
      if (v.size() != origin.size()) throw ManifestError("affine_subspace: direction dimension");
      dirs.col(j) = v;
    }
    return catalog::affine_subspace(origin, dirs, number(params, "half_length", 10.0));
  }
  if (key == "point_set") {
    if (!params.contains("points") || !params["points"].is_array() || params["points"].empty()) {
      throw ManifestError("point_set needs a nonempty points list");
    }
    std::vector<Vec> pts;
    for (const json& p : params["points"]) pts.push_back(vector_of(p, "point_set.points"));
    for (const Vec& p : pts) {
      if (p.size() != pts.front().size()) throw ManifestError("point_set: mixed dimensions");
    }
    return catalog::point_set(pts);
  }
  throw ManifestError("unknown catalog key '" + key + "'");
}

int integer(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw ManifestError(std::string("manifest needs integer '") + key + "'");
  }
  return doc[key].get<int>();
}

}  // namespace

std::vector<std::string> builtin_keys() {
  return {"circle",       "sphere",   "torus",  "parabola", "half_parabola",
          "lip1",         "helix",    "quarter_circle_with_rays",
          "two_parallel_lines", "line", "affine_subspace", "point_set"};
}

ManifoldSpec builtin_manifold(const std::string& key, const std::string& params_json) {
  json params;
  try {
    params = json::parse(params_json);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("builtin params: ") + e.what());
  }
  return builtin_from_json(key, params);
}

LoadedManifest parse_manifest(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
  const std::string name = doc.value("name", std::string("manifold"));
  const int d = integer(doc, "ambient_dim");
  const int m = integer(doc, "param_dim");
  if (m < 0 || d <= m) throw ManifestError("need 0 <= param_dim < ambient_dim");
  if (!doc.contains("charts") || !doc["charts"].is_array() || doc["charts"].empty()) {
    throw ManifestError("manifest needs a nonempty 'charts' array");
  }

  std::vector<Chart> charts;
  int smoothness = -1;  // least claim over the charts; expressions claim 2
  const auto claim = [&smoothness](int k) { smoothness = smoothness < 0 ? k : std::min(smoothness, k); };
  for (const json& c : doc["charts"]) {
    if (!c.is_object()) throw ManifestError("chart entries must be objects");
    const std::string kind = c.value("kind", std::string());
    if (!c.contains("payload") || !c["payload"].is_object()) {
      throw ManifestError("chart needs an object 'payload'");
    }
    const json& payload = c["payload"];
    if (kind == "builtin") {
      if (!payload.contains("catalog") || !payload["catalog"].is_string()) {
        throw ManifestError("builtin payload needs a 'catalog' key");
      }
      ManifoldSpec b = builtin_from_json(payload["catalog"].get<std::string>(),
                                         payload.value("params", json::object()));
      if (b.ambient_dim() != d || b.param_dim() != m) {
        throw ManifestError("builtin '" + b.name + "' has dimensions (" +
                            std::to_string(b.param_dim()) + ", " + std::to_string(b.ambient_dim()) +
                            "), manifest declares (" + std::to_string(m) + ", " +
                            std::to_string(d) + ")");
      }
      claim(b.smoothness_claim);
      if (c.contains("domain")) {
        if (b.charts.size() != 1) throw ManifestError("domain override needs a single-chart builtin");
        try {
          charts.push_back(b.charts.front().with_domain(box_of(c["domain"], m)));
        } catch (const PreconditionError& e) {
          throw ManifestError(std::string("builtin domain: ") + e.what());
        }
      } else {
        for (Chart& ch : b.charts) charts.push_back(std::move(ch));
      }
    } else if (kind == "expression") {
      if (!payload.contains("components") || !payload["components"].is_array()) {
        throw ManifestError("expression payload needs a 'components' array");
      }
      std::vector<std::string> comps;
      for (const json& e : payload["components"]) {
        if (!e.is_string()) throw ManifestError("expression components must be strings");
        comps.push_back(e.get<std::string>());
      }
      if (static_cast<int>(comps.size()) != d) {
        throw ManifestError("expression chart has " + std::to_string(comps.size()) +
                            " components, ambient_dim is " + std::to_string(d));
      }
      if (!c.contains("domain")) throw ManifestError("expression chart needs a domain");
      charts.push_back(expr::expression_chart(comps, m, box_of(c["domain"], m)));
      claim(2);
    } else {
      throw ManifestError("chart kind must be 'builtin' or 'expression'");
    }
  }
  if (doc.contains("smoothness")) {
    if (!doc["smoothness"].is_number_integer() || doc["smoothness"].get<int>() < 1) {
      throw ManifestError("smoothness must be an integer >= 1");
    }
    smoothness = doc["smoothness"].get<int>();
  }

  LoadedManifest out{ManifoldSpec(name, std::move(charts), smoothness), {}};
  if (doc.contains("projection")) {
    const json& p = doc["projection"];
    if (!p.is_object()) throw ManifestError("'projection' must be an object");
    ProjectionOptions& o = out.projection;
    o.tol_sep_rel = number(p, "tol_sep_rel", o.tol_sep_rel);
    o.tol_dist_rel = number(p, "tol_dist_rel", o.tol_dist_rel);
    o.grid_per_dim = static_cast<int>(number(p, "grid_per_dim", o.grid_per_dim));
    o.quasi_random_starts = static_cast<int>(number(p, "quasi_random_starts", o.quasi_random_starts));
    o.max_iterations = static_cast<int>(number(p, "max_iterations", o.max_iterations));
    o.seed = static_cast<std::uint64_t>(number(p, "seed", 0));
    if (!(o.tol_sep_rel > 0) || !(o.tol_dist_rel > 0) || o.grid_per_dim < 1 ||
        o.quasi_random_starts < 0 || o.max_iterations < 1) {
      throw ManifestError("projection options out of range");
    }
  }
  return out;
}

LoadedManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

}  // namespace projgeom
