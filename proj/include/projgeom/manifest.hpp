#pragma once

#include "projgeom/manifold.hpp"
#include "projgeom/projection.hpp"

#include <string>

namespace projgeom {

struct LoadedManifest {
  ManifoldSpec manifold;
  ProjectionOptions projection;
};

/// Parses a manifest document:
///   {"name", "ambient_dim", "param_dim", "smoothness"?,
///    "charts": [{"domain": {"lo", "hi", "truncated_lo"?, "truncated_hi"?},
///                "kind": "builtin" | "expression", "payload": {...}}],
///    "projection"?: {"tol_sep_rel", "tol_dist_rel", "grid_per_dim",
///                    "quasi_random_starts", "max_iterations", "seed"}}
/// A builtin payload {"catalog": key, "params": {...}} contributes all charts
/// of that catalog manifold; a "domain", if given, restricts a single-chart
/// builtin. An expression payload is {"components": ["...", ...]}.
LoadedManifest parse_manifest(const std::string& text);
LoadedManifest load_manifest(const std::string& path);

/// Catalog manifold by key with parameters given as a JSON object text.
ManifoldSpec builtin_manifold(const std::string& key, const std::string& params_json = "{}");

/// Catalog keys accepted in builtin payloads.
std::vector<std::string> builtin_keys();

}  // namespace projgeom
