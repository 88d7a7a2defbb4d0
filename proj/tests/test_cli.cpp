#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projgeom/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using projgeom::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string manifest(const std::string& name) {
  return std::string(PROJGEOM_SOURCE_DIR) + "/manifests/" + name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("projgeom_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"project", "--point", "1,0"}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"project", "--help"}).code == 0);
}

TEST_CASE("validation errors exit 2") {
  CHECK(call({"project", "--manifest", "/nonexistent.json", "--point", "1,0"}).code == 2);
  CHECK(call({"project", "--manifest", manifest("circle.json"), "--point", "1,0,0"}).code == 2);
  CHECK(call({"frontier", "--manifest", manifest("circle.json"), "--coords", "0", "--direction",
              "0,1"})
            .code == 2);
  CHECK(call({"frontier", "--manifest", manifest("circle.json"), "--coords", "0", "--direction",
              "1,0", "--tol", "-1"})
            .code == 2);
  CHECK(call({"ecomp", "--manifest", manifest("circle.json"), "--region", "0,1"}).code == 2);
  CHECK(call({"demo", "nope"}).code == 2);
}

TEST_CASE("solver errors exit 3") {
  // Finite differences straddling the circle's centre jump between feet.
  const Outcome o = call({"dpcheck", "--manifest", manifest("circle.json"), "--point", "1e-7,0"});
  CHECK(o.code == 3);
}

TEST_CASE("project prints a JSON report") {
  const Outcome o = call({"project", "--manifest", manifest("circle.json"), "--point", "2,0"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["multiplicity"] == "Unique");
  CHECK(j["global_distance"].get<double>() == doctest::Approx(1.0));
  CHECK(j["minima"][0]["point"][0].get<double>() == doctest::Approx(1.0));
  const Outcome c = call({"project", "--manifest", manifest("circle.json"), "--point", "0,0",
                          "--classify"});
  CHECK(nlohmann::json::parse(c.out)["label"] == "SkeletonCandidate");
}

TEST_CASE("frontier and curvature on the circle") {
  const Outcome f = call({"frontier", "--manifest", manifest("circle.json"), "--coords", "0",
                          "--direction", "-1,0"});
  REQUIRE(f.code == 0);
  const auto j = nlohmann::json::parse(f.out);
  CHECK(j["theta_lo"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  const Outcome c = call({"curvature", "--manifest", manifest("circle.json"), "--coords", "0",
                          "--direction", "1,0"});
  REQUIRE(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["rho"] == "inf");
}

TEST_CASE("reach of the circle") {
  const Outcome o = call({"reach", "--manifest", manifest("circle.json")});
  REQUIRE(o.code == 0);
  std::istringstream in(o.out);
  std::string key;
  double value = 0;
  in >> key >> value;
  CHECK(key == "reach");
  CHECK(std::abs(value - 1.0) <= 1e-3);
}

TEST_CASE("fixed seed gives byte-identical CSV regardless of jobs") {
  const auto a = scratch("a"), b = scratch("b");
  const std::vector<std::string> base = {"ecomp", "--manifest", manifest("half_parabola.json"),
                                         "--region", "-1,0,1,2", "--grid", "25", "--seed", "5"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string(), "--jobs", "1"});
  args_b.insert(args_b.end(), {"--out", b.string(), "--jobs", "2"});
  REQUIRE(call(args_a).code == 0);
  REQUIRE(call(args_b).code == 0);
  for (const char* f : {"ecomp_estimate.csv", "ecomp_decomposition.csv", "ecomp.svg"}) {
    CAPTURE(f);
    const std::string sa = slurp(a / f);
    CHECK_FALSE(sa.empty());
    CHECK(sa == slurp(b / f));
  }
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("theta-profile writes one row per foot") {
  const auto d = scratch("profile");
  const Outcome o = call({"theta-profile", "--manifest", manifest("parabola.json"), "--from", "-1",
                          "--to", "1", "--count", "5", "--direction", "0,1", "--out", d.string()});
  REQUIRE(o.code == 0);
  const std::string csv = slurp(d / "theta_profile.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find("\r\n") != std::string::npos);
  std::filesystem::remove_all(d);
}

TEST_CASE("voronoi demo") {
  const auto d = scratch("voronoi");
  const Outcome o = call({"demo", "voronoi", "--grid", "81", "--out", d.string()});
  CHECK(o.code == 0);
  CHECK(std::filesystem::exists(d / "voronoi.csv"));
  CHECK(std::filesystem::exists(d / "voronoi.svg"));
  std::filesystem::remove_all(d);
}
