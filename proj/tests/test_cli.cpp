#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qsh/cli.hpp"
#include "qsh/config.hpp"

using namespace qsh;
namespace fs = std::filesystem;

namespace {

fs::path dir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / "qsh_cli_test";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string put(const std::string& name, const std::string& text) {
  const auto p = dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "qsh");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

Json report(const std::string& path) { return Json::parse(slurp(path)); }

}  // namespace

TEST_CASE("norm subcommand") {
  const auto out = (dir() / "n.json").string();
  const auto c1 = put("const1.json", R"({"type":"constant","value":1})");
  CHECK(run({"norm", "--space", "hardy", "--p", "2", "--function", c1, "--out", out}) == kExitOk);
  CHECK(report(out)["report"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));

  const auto inv = put("inv.json", R"({"type":"inv_sqrt_one_plus_s"})");
  CHECK(run({"norm", "--space", "hardy", "--p", "2", "--function", inv, "--out", out}) == kExitDivergent);
  CHECK(report(out)["report"]["diverged"].get<bool>());
  CHECK(report(out)["report"]["value"] == "inf");

  // frozen at first run with default budgets
  const auto log0 = put("log0.json", R"({"type":"log_alpha","alpha":0})");
  CHECK(run({"norm", "--space", "bmo", "--function", log0, "--out", out}) == kExitOk);
  const auto r = report(out)["report"];
  CHECK_FALSE(r["diverged"].get<bool>());
  CHECK(r["value"].get<double>() == doctest::Approx(1.8520095330467177).epsilon(1e-9));

  CHECK(run({"norm", "--space", "hardy", "--function", (dir() / "missing.json").string()}) == kExitInput);
  CHECK(run({"norm", "--space", "foo", "--function", c1}) == kExitInput);
  CHECK(run({"norm", "--space", "hardy", "--function", put("bad.json", "{\"type\":")}) == kExitInput);
  CHECK(run({"norm", "--space", "dirichlet", "--function", log0, "--out", out}) == kExitDivergent);
}

TEST_CASE("carleson and decompose subcommands") {
  const auto out = (dir() / "c.json").string();
  CHECK(run({"carleson", "--measure", put("z.json", R"({"type":"zero"})"), "--out", out}) == kExitOk);
  CHECK(report(out)["report"]["constant"].get<double>() == 0.0);

  const auto mu = put("mu.json", R"({"type":"density","name":"mu_f","function":{"type":"monomial","n":3}})");
  CHECK(run({"carleson", "--measure", mu, "--out", out}) == kExitOk);
  CHECK(report(out)["report"]["carleson"].get<bool>());
  CHECK(report(out)["report"]["vanishing"].get<bool>());

  const auto ex = put("ex.json", R"({"type":"pointmass_example","n_max":100000})");
  const auto csv = (dir() / "c.csv").string();
  CHECK(run({"carleson", "--measure", ex, "--slices", "--max-units", "64", "--csv", csv, "--out", out}) == kExitOk);
  const auto j = report(out);
  CHECK_FALSE(j["report"]["carleson"].get<bool>());
  CHECK_FALSE(j["slices"]["slice_carleson"].get<bool>());
  for (const auto& u : j["slices"]["units"]) CHECK(u["carleson"].get<bool>());
  CHECK(j["bound_check"]["holds"].get<bool>());
  CHECK(slurp(csv).rfind("h,theta0,ratio\n", 0) == 0);

  CHECK(run({"carleson", "--measure", put("inv.json", R"({"type":"density","name":"mu_f","function":{"type":"inv_sqrt_one_plus_s"}})"),
             "--out", out}) == kExitDivergent);

  const auto at = put("at.json", R"({"type":"point_masses","atoms":[{"point":[0.5,0.3,0,0],"mass":0.2},{"point":[0.4,0,0,0],"mass":0.3}]})");
  CHECK(run({"decompose", "--measure", at, "--out", out}) == kExitOk);
  const auto d = report(out);
  CHECK(d["mu_r_total"].get<double>() == doctest::Approx(0.3));
  CHECK(d["nu_total"].get<double>() == doctest::Approx(0.2));
  CHECK(d["total_mass_decomposed"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("moebius-check and corpus subcommands") {
  const auto out = (dir() / "m.json").string();
  CHECK(run({"moebius-check", "--a", "0", "--out", out}) == kExitOk);
  CHECK(report(out)["circle_modulus_dev_verbatim"].get<double>() <= 1e-10);
  CHECK(run({"moebius-check", "--a", "[0.5,0,0,0]", "--i", "[0,0,1,0]", "--out", out}) == kExitOk);
  CHECK(report(out)["circle_modulus_dev_ref"].get<double>() <= 1e-10);
  CHECK(run({"moebius-check", "--a", "[0.5,0]"}) == kExitInput);

  CHECK(run({"corpus", "list", "--out", out}) == kExitOk);
  const auto l = report(out);
  CHECK(l["entries"].size() == 21);
  for (const auto& e : l["entries"])
    for (const auto& [k, v] : e["flags"].items())
      if (v["expected"] != "unknown") CHECK_FALSE(v["note"].get<std::string>().empty());
  CHECK(run({"corpus", "classify", "--id", "mono_3", "--id", "log_0.7", "--out", out}) == kExitOk);
  CHECK(report(out)["mismatches"].get<int>() == 0);
  CHECK(run({"corpus", "classify", "--id", "nope"}) == kExitInput);
}

TEST_CASE("suite subcommand") {
  const auto out = (dir() / "s.json").string();
  CHECK(run({"suite", "--only", "pairing", "--only", "8", "--out", out}) == kExitOk);
  const auto j = report(out);
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][0]["id"] == "pairing");
  CHECK(j["checks"][1]["id"] == "representation");
  CHECK(run({"suite", "--only", "nope"}) == kExitInput);
  // halved budgets still run
  CHECK(run({"suite", "--only", "pairing", "--budget-scale", "0.5", "--out", out}) == kExitOk);
  CHECK(report(out)["config"]["circle_nodes"].get<int>() == 1024);
}

TEST_CASE("config file, echo and reproducibility") {
  RunConfig c;
  c.norm.circle_nodes = 1024;
  c.seed = 11;
  c.tol_moebius = 0.1;
  c.out = "x.json";
  const RunConfig back = parse_config(config_text(c));
  CHECK(to_json(back).dump() == to_json(c).dump());
  CHECK(config_keys().size() == to_json(c).size());
  CHECK_THROWS_AS(parse_config("bogus = 1"), Error);
  CHECK_THROWS_AS(parse_config("circle_nodes = -3"), Error);
  CHECK_THROWS_AS(parse_config("circle_nodes = 12x"), Error);
  CHECK_THROWS_AS(parse_config("sphere_phi = 7"), Error);
  CHECK(parse_config("# comment\n\n seed = 3 # trailing\n").seed == 3);

  const auto conf = put("small.conf", "circle_nodes = 512\nseed = 5\n");
  const auto f = put("p.json", R"({"type":"power_series","coeffs":[0,[0,1,0,0],[0.5,0,0,0.25]]})");
  const auto out = (dir() / "r.json").string();
  CHECK(run({"norm", "--config", conf, "--space", "star", "--function", f, "--out", out}) == kExitOk);
  const std::string first = slurp(out);
  CHECK(run({"norm", "--config", conf, "--space", "star", "--function", f, "--out", out}) == kExitOk);
  CHECK(slurp(out) == first);
  const auto j = Json::parse(first);
  CHECK(j["config"]["circle_nodes"].get<int>() == 512);
  CHECK(j["config"]["seed"].get<int>() == 5);
  CHECK(to_json(parse_config(j["config_text"].get<std::string>())).dump() == j["config"].dump());
  CHECK(run({"norm", "--config", put("bad.conf", "bogus = 2\n"), "--space", "star", "--function", f}) == kExitInput);
}
