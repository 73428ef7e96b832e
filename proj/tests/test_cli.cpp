#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "netputsim/calibration.hpp"
#include "netputsim/cli.hpp"
#include "netputsim/csv.hpp"
#include "netputsim/param_io.hpp"
#include "netputsim/synth.hpp"

using namespace netputsim;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

csv::Table table(const fs::path& p) { return csv::read(p); }

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("netputsim_cli_" + std::to_string(::getpid()) + "_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

std::vector<std::string> all_params(const Scratch& s, const std::string& sub, const std::string& stem) {
  std::vector<std::string> v;
  for (IndustryId id : kAllIndustries) {
    v.push_back("--params");
    v.push_back(s / (sub + "/" + stem + "_" + std::string(to_string(id)) + ".json"));
  }
  return v;
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

double max_rel_diff(const Json& a, const Json& b) {
  if (a.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) / std::max(1.0, std::abs(x));
  }
  double m = 0.0;
  if (a.is_array()) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, max_rel_diff(a[i], b[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("usage errors and help") {
  const auto none = run({});
  CHECK(none.code == 1);
  const Json e = Json::parse(none.err);
  CHECK(e["error"]["code"] == "usage");

  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(run({"--version"}).out.find(std::string(kToolVersion)) != std::string::npos);

  CHECK(run({"estimate", "--out", "x"}).code == 1);  // --panel missing
  CHECK(run({"simulate", "--out", "x", "--pct-denominator", "median"}).code == 1);
}

TEST_CASE("synth is deterministic and estimate recovers the truth") {
  Scratch s("estimate");
  REQUIRE(run({"synth", "--out", s / "a", "--seed", "4", "--farms", "60"}).code == 0);
  REQUIRE(run({"synth", "--out", s / "b", "--seed", "4", "--farms", "60"}).code == 0);
  for (const auto& f : fs::directory_iterator(s.dir / "a")) {
    CHECK(slurp(f.path()) == slurp(s.dir / "b" / f.path().filename()));
  }
  REQUIRE(run({"synth", "--out", s / "c", "--seed", "5", "--farms", "60"}).code == 0);
  CHECK(slurp(s.dir / "a" / "panel.csv") != slurp(s.dir / "c" / "panel.csv"));

  const auto est = run({"estimate", "--panel", s / "a/panel.csv", "--out", s / "e",
                        "--allow-negative-quantities", "--threads", "2"});
  REQUIRE_MESSAGE(est.code == 0, est.err);
  for (IndustryId id : kAllIndustries) {
    const std::string name(to_string(id));
    const Json truth = read_json_file(s / ("a/truth_" + name + ".json"));
    const Json got = read_json_file(s / ("e/params_" + name + ".json"));
    for (const char* k : {"a", "b", "C", "D", "alpha", "gamma", "gamma_m", "a_m"}) {
      CHECK_MESSAGE(max_rel_diff(truth[k], got[k]) < 1e-6, name << " " << k);
    }
    const ParameterSet p = load_params(s / ("e/params_" + name + ".json"));
    CHECK(p.C == p.C.transpose());
    const Json meta = got["metadata"];
    CHECK(meta["tool"] == "netputsim");
    CHECK(meta["inputs"][0]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(table(s / ("e/parameters_" + name + ".csv")).comments.size() >= 3);
  }

  // Same inputs, same bytes, whatever the thread count.
  REQUIRE(run({"estimate", "--panel", s / "a/panel.csv", "--out", s / "e2",
               "--allow-negative-quantities", "--threads", "1"}).code == 0);
  for (const auto& f : fs::directory_iterator(s.dir / "e")) {
    CHECK(slurp(f.path()) == slurp(s.dir / "e2" / f.path().filename()));
  }

  // Negative synthetic quantities are refused without the flag.
  const auto strict = run({"estimate", "--panel", s / "a/panel.csv", "--out", s / "x"});
  if (strict.code != 0) {
    CHECK(strict.code == 2);
    CHECK(Json::parse(strict.err)["error"]["code"] == "validation_error");
  }
}

TEST_CASE("rank-deficient panel names the column") {
  Scratch s("rank");
  CalibratedPanelOptions o;
  o.farms = 40;
  o.industries = {IndustryId::kDairy};
  SynthConfig cfg = calibrated_synth_config(o);
  for (auto& c : cfg.industries[0].controls) {
    if (c.bernoulli) c.mean = 0.0;  // a control that never varies from zero
  }
  write_json_file(synth_config_to_json(cfg), s.dir / "cfg.json", true);
  REQUIRE(run({"synth", "--config", s / "cfg.json", "--out", s / "p"}).code == 0);
  const auto r = run({"estimate", "--panel", s / "p/panel.csv", "--out", s / "e", "--allow-negative-quantities"});
  CHECK(r.code == 2);
  const Json e = Json::parse(r.err);
  CHECK(e["error"]["code"] == "rank_deficient");
  REQUIRE(e["error"]["details"].size() == 1);
  CHECK(e["error"]["details"][0].get<std::string>().find("education") != std::string::npos);
  CHECK_FALSE(fs::exists(s.dir / "e" / "params_dairy.json"));
}

TEST_CASE("simulate, validate, demand curves and elasticities") {
  Scratch s("pipeline");
  REQUIRE(run({"synth", "--out", s / "p", "--seed", "2", "--farms", "30"}).code == 0);
  const auto truth = all_params(s, "p", "truth");
  const std::vector<std::string> panel{"--panel", s / "p/panel.csv", "--allow-negative-quantities"};
  {
    std::ofstream(s.dir / "identity.json") << R"({"name": "identity", "overrides": [{"netput": "water", "factor": 1.0}]})";
    std::ofstream(s.dir / "water.json") << R"({"name": "water +30%", "overrides": [{"netput": "water", "factor": 1.3}]})";
  }
  auto sim = [&](const std::string& scenario, const std::string& out) {
    return run(cat(cat({"simulate", "--scenario", s / scenario, "--out", s / out}, truth), panel));
  };
  REQUIRE(sim("identity.json", "id").code == 0);
  const auto id = table(s.dir / "id/farm_deltas.csv");
  const auto change = *id.column("change");
  for (const auto& row : id.rows) CHECK(std::stod(row[change]) == 0.0);

  REQUIRE(sim("water.json", "w").code == 0);
  const Json agg = read_json_file(s.dir / "w/aggregate.json");
  for (const auto& ind : agg["industries"]) {
    if (ind["key"] == "horticulture") continue;
    CHECK(ind["profit"]["change"].get<double>() < 0);
    for (const auto& n : ind["netputs"]) {
      if (n["name"] == "water") CHECK(n["change"].get<double>() < 0);
    }
  }
  for (const auto& t : agg["decomposition"]) {
    if (t["industry"] == "horticulture") continue;
    for (const auto& l : t["lines"]) {
      if (l["item"] == "water cost") CHECK(l["change"].get<double>() > 0);
    }
  }
  CHECK(table(s.dir / "w/region_profit.csv").header.back() == "pct_change");

  REQUIRE(run(cat(cat({"validate", "--out", s / "v"}, truth), panel)).code == 0);
  const auto r2 = table(s.dir / "v/r_squared.csv");
  CHECK(r2.rows.size() == 23);
  for (const auto& row : r2.rows) CHECK(std::stod(row[3]) >= 1 - 1e-9);
  CHECK(fs::exists(s.dir / "v/fit_horticulture.csv"));
  CHECK(read_json_file(s.dir / "v/validation.json")["industries"][3]["fit_file"] == "fit_horticulture.csv");

  REQUIRE(run(cat(cat({"demand-curve", "--out", s / "d", "--points", "11", "--industry", "dairy"}, truth), panel)).code == 0);
  CHECK(table(s.dir / "d/demand_curves_dairy.csv").rows.size() <= 44);
  CHECK_FALSE(fs::exists(s.dir / "d/demand_curves_horticulture.csv"));

  REQUIRE(run(cat(cat({"elasticities", "--out", s / "el", "--reduction", "mean"}, truth), panel)).code == 0);
  CHECK(fs::exists(s.dir / "el/water_own_price.csv"));
  CHECK(run({"elasticities", "--out", s / "bad"}).code == 2);
}

TEST_CASE("published water elasticities from the fixtures") {
  Scratch s("fixtures");
  REQUIRE(run({"elasticities", "--fixtures", "--out", s / "f"}).code == 0);
  const auto t = table(s.dir / "f/water_own_price.csv");
  REQUIRE(t.rows.size() == 4);
  const double expect[] = {-0.49, -2.23, -1.18, 0.01};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.rows[i][0] == to_string(kAllIndustries[i]));
    CHECK(std::abs(std::stod(t.rows[i][1]) - expect[i]) <= 0.005);
  }
  REQUIRE(run({"elasticities", "--fixtures", "--pretty", "--out", s / "g"}).code == 0);
  const auto pretty = table(s.dir / "g/water_own_price.csv");
  CHECK(pretty.rows[0][1].size() < t.rows[0][1].size());
}
