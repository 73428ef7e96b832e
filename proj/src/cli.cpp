#include "netputsim/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "netputsim/calibration.hpp"
#include "netputsim/digest.hpp"
#include "netputsim/error.hpp"
#include "netputsim/estimator.hpp"
#include "netputsim/panel_io.hpp"
#include "netputsim/response.hpp"
#include "netputsim/shock.hpp"
#include "netputsim/synth.hpp"
#include "netputsim/validator.hpp"

namespace fs = std::filesystem;

namespace netputsim {

Json RunConfig::to_json() const {
  Json j;
  j["subcommand"] = subcommand;
  if (!panel.empty()) j["panel"] = panel;
  if (!params.empty()) j["params"] = params;
  if (!scenario.empty()) j["scenario"] = scenario;
  if (!config.empty()) j["config"] = config;
  j["industries"] = industries;
  j["seed"] = seed;
  j["weighted_estimation"] = weighted_estimation;
  j["numeraire_equation"] = numeraire_equation;
  j["allow_negative_quantities"] = allow_negative_quantities;
  j["pct_denominator"] = pct_denominator;
  j["reduction"] = reduction;
  j["fixtures"] = fixtures;
  j["farms"] = farms;
  j["noise"] = noise;
  j["price_max"] = price_max ? Json(*price_max) : Json(nullptr);
  j["points"] = points;
  j["pretty"] = pretty;
  return j;
}

namespace {

// Everything a subcommand needs besides its options.
struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  Json inputs = Json::array();

  Json metadata() const {
    Json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["options"] = cfg.to_json();
    m["inputs"] = inputs;
    return m;
  }

  void record_input(const std::string& path) {
    inputs.push_back({{"path", path}, {"digest", file_digest(path)}});
  }

  fs::path out_dir() const {
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
  }

  void write_csv(const std::string& name, const std::string& body) const {
    std::ostringstream text;
    const Json m = metadata();
    text << "# tool=" << kToolName << ' ' << kToolVersion << '\n';
    text << "# options=" << m["options"].dump() << '\n';
    for (const auto& in : inputs) {
      text << "# input=" << in["path"].get<std::string>() << " digest=" << in["digest"].get<std::string>() << '\n';
    }
    text << body;
    write_file(name, text.str());
  }

  void write_json(const std::string& name, Json j) const {
    j["metadata"] = metadata();
    write_file(name, cfg.pretty ? j.dump(2) + "\n" : j.dump() + "\n");
  }

  void write_file(const std::string& name, const std::string& text) const {
    const fs::path path = out_dir() / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    f << text;
    if (!f) throw Error(ErrorCode::kIo, "write failed for " + path.string());
    spdlog::info("wrote {}", path.string());
    out << path.string() << '\n';
  }
};

// Runs f(0..n-1) on up to `threads` workers; the first exception wins.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

FarmPanel load_input_panel(Context& ctx) {
  PanelSchema schema = PanelSchema::standard();
  schema.allow_negative_quantities = ctx.cfg.allow_negative_quantities;
  PanelLoadReport report;
  FarmPanel panel = load_panel(ctx.cfg.panel, schema, &report);
  ctx.record_input(ctx.cfg.panel);
  spdlog::info("panel {}: {} rows, {} water prices resolved, {} capital imputed", ctx.cfg.panel,
               report.rows, report.water_price_resolved, report.capital_imputed);
  return panel;
}

std::vector<IndustryId> selected(const RunConfig& cfg, const std::vector<IndustryId>& available) {
  if (cfg.industries.empty()) return available;
  std::vector<IndustryId> ids;
  std::vector<std::string> missing;
  for (const auto& name : cfg.industries) {
    const IndustryId id = parse_industry(name);
    if (std::find(available.begin(), available.end(), id) == available.end()) {
      missing.push_back(name);
    } else if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      ids.push_back(id);
    }
  }
  if (!missing.empty()) throw Error(ErrorCode::kInvalidArgument, "requested industries are not available", missing);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::map<IndustryId, ParameterSet> load_input_params(Context& ctx) {
  std::map<IndustryId, ParameterSet> all;
  for (const auto& path : ctx.cfg.params) {
    ParameterSet p = load_params(path);
    ctx.record_input(path);
    if (all.count(p.industry)) {
      throw Error(ErrorCode::kInvalidArgument, "more than one parameter file for " +
                                                   std::string(to_string(p.industry)), {path});
    }
    all.emplace(p.industry, std::move(p));
  }
  std::vector<IndustryId> have;
  for (const auto& [id, p] : all) have.push_back(id);
  std::map<IndustryId, ParameterSet> out;
  for (IndustryId id : selected(ctx.cfg, have)) out.emplace(id, all.at(id));
  if (out.empty()) throw Error(ErrorCode::kEmptyInput, "no parameter sets selected");
  return out;
}

std::string name_for(std::string_view stem, IndustryId id, std::string_view ext) {
  return std::string(stem) + "_" + std::string(to_string(id)) + std::string(ext);
}

void cmd_estimate(Context& ctx) {
  const FarmPanel panel = load_input_panel(ctx);
  const auto ids = selected(ctx.cfg, panel.industries());
  if (ids.empty()) throw Error(ErrorCode::kEmptyInput, "panel holds no records");
  std::vector<EstimateReport> reports(ids.size());
  parallel_for(ids.size(), ctx.cfg.threads, [&](std::size_t i) {
    const IndustrySpec& spec = industry_spec(ids[i]);
    const SystemDesign design = build_design(panel.subset(ids[i]), spec, {ctx.cfg.weighted_estimation});
    EstimateOptions opt;
    opt.numeraire_equation = ctx.cfg.numeraire_equation;
    reports[i] = estimate(design, opt);
    spdlog::info("{}: {} observations, {} iterations, converged={}", to_string(ids[i]),
                 reports[i].observations, reports[i].iterations.size(), reports[i].converged);
  });
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Json params = params_to_json(reports[i].params);
    ctx.write_json(name_for("params", ids[i], ".json"), params);
    ctx.write_json(name_for("estimate", ids[i], ".json"), report_to_json(reports[i]));
    ctx.write_csv(name_for("parameters", ids[i], ".csv"), parameters_csv(reports[i], ctx.cfg.pretty));
  }
}

void cmd_simulate(Context& ctx) {
  const auto params = load_input_params(ctx);
  const FarmPanel panel = load_input_panel(ctx);
  const Scenario scenario = load_scenario(ctx.cfg.scenario);
  ctx.record_input(ctx.cfg.scenario);
  const PctDenominator d = parse_pct_denominator(ctx.cfg.pct_denominator);
  const SimulationResult r = simulate(params, panel, scenario);
  ctx.write_csv("farm_deltas.csv", farm_deltas_csv(r.farms, ctx.cfg.pretty));
  ctx.write_json("aggregate.json", simulation_to_json(r, d));
  ctx.write_csv("region_profit.csv", region_profit_csv(r.by_region, d, ctx.cfg.pretty));
}

void cmd_elasticities(Context& ctx) {
  std::vector<ElasticityMatrix> es;
  std::vector<MarginalEffectMatrix> ms;
  if (ctx.cfg.fixtures) {
    if (!ctx.cfg.params.empty() || !ctx.cfg.panel.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--fixtures takes no --params or --panel");
    }
    for (IndustryId id : selected(ctx.cfg, {std::begin(kAllIndustries), std::end(kAllIndustries)})) {
      const auto& fx = published_effects(id);
      MarginalEffectMatrix m = marginal_effects_at(fixture_params(id), fixture_point(id),
                                                   industry_spec(id).per_hectare ? fx.mean_area : 1.0);
      m.p_value = fx.marginal_p;
      ms.push_back(m);
      es.push_back(fixture_elasticities(id));
    }
  } else {
    const auto params = load_input_params(ctx);
    const FarmPanel panel = load_input_panel(ctx);
    const Reduction reduction = parse_reduction(ctx.cfg.reduction);
    for (const auto& [id, p] : params) {
      const FarmPanel sub = panel.subset(id);
      const MarginalEffectMatrix m = marginal_effects(p, sub, reduction);
      ms.push_back(m);
      es.push_back(elasticities(m, weighted_mean_prices(sub, id), weighted_mean_quantities(sub, id)));
    }
  }
  Json all;
  all["industries"] = Json::array();
  for (std::size_t i = 0; i < es.size(); ++i) {
    ctx.write_csv(name_for("marginal_effects", ms[i].industry, ".csv"), marginal_effects_csv(ms[i], ctx.cfg.pretty));
    ctx.write_csv(name_for("elasticities", es[i].industry, ".csv"), elasticities_csv(es[i], ctx.cfg.pretty));
    all["industries"].push_back({{"marginal_effects", to_json(ms[i])}, {"elasticities", to_json(es[i])}});
  }
  ctx.write_json("elasticities.json", all);
  if (es.size() == std::size(kAllIndustries)) {
    ctx.write_csv("water_own_price.csv", water_table_csv(own_price_water_table(es), ctx.cfg.pretty));
  }
}

void cmd_demand_curve(Context& ctx) {
  const auto params = load_input_params(ctx);
  const FarmPanel panel = load_input_panel(ctx);
  Json all;
  all["industries"] = Json::array();
  for (const auto& [id, p] : params) {
    const FarmPanel sub = panel.subset(id);
    const auto profiles = quartile_profiles(sub);
    const auto water = static_cast<Eigen::Index>(industry_spec(id).water_index());
    const double top = ctx.cfg.price_max.value_or(2.0 * weighted_mean_prices(sub, id).raw()[water]);
    const auto grid = linear_grid(top / ctx.cfg.points, top, ctx.cfg.points);  // uniform step, positive prices
    std::vector<DemandCurve> curves;
    Json ji;
    ji["industry"] = to_string(id);
    ji["quartiles"] = Json::array();
    for (const auto& prof : profiles) {
      curves.push_back(water_demand_curve(p, prof, grid));
      const auto& c = curves.back();
      ji["quartiles"].push_back({{"quartile", prof.label},
                                 {"area_operated", prof.area_operated},
                                 {"area", prof.area},
                                 {"choke_price", c.choke_price ? Json(*c.choke_price) : Json(nullptr)}});
    }
    ctx.write_csv(name_for("demand_curves", id, ".csv"), demand_curves_csv(curves, ctx.cfg.pretty));
    all["industries"].push_back(ji);
  }
  ctx.write_json("demand_curves.json", all);
}

void cmd_validate(Context& ctx) {
  const auto params = load_input_params(ctx);
  const FarmPanel panel = load_input_panel(ctx);
  std::vector<const ParameterSet*> ps;
  for (const auto& [id, p] : params) ps.push_back(&p);
  ValidationReport report;
  report.industries.resize(ps.size());
  parallel_for(ps.size(), ctx.cfg.threads, [&](std::size_t i) {
    report.industries[i] = validate_industry(*ps[i], panel.subset(ps[i]->industry));
  });
  for (auto& ind : report.industries) {
    ind.fit_file = name_for("fit", ind.industry, ".csv");
    ctx.write_csv(ind.fit_file, fit_export_csv(ind.fit, ctx.cfg.pretty));
  }
  ctx.write_csv("r_squared.csv", r_squared_csv(report, ctx.cfg.pretty));
  ctx.write_csv("monotonicity.csv", monotonicity_csv(report, ctx.cfg.pretty));
  ctx.write_json("validation.json", validation_to_json(report));
}

void cmd_synth(Context& ctx) {
  SynthConfig sc;
  if (!ctx.cfg.config.empty()) {
    sc = synth_config_from_json(read_json_file(ctx.cfg.config));
    ctx.record_input(ctx.cfg.config);
    sc.seed = ctx.cfg.seed;
    if (!ctx.cfg.industries.empty()) {
      const auto keep = selected(ctx.cfg, [&] {
        std::vector<IndustryId> v;
        for (const auto& ic : sc.industries) v.push_back(ic.industry);
        return v;
      }());
      std::erase_if(sc.industries, [&](const SynthIndustryConfig& ic) {
        return std::find(keep.begin(), keep.end(), ic.industry) == keep.end();
      });
    }
  } else {
    CalibratedPanelOptions o;
    o.farms = ctx.cfg.farms;
    o.seed = ctx.cfg.seed;
    o.noise_fraction = ctx.cfg.noise;
    o.industries = selected(ctx.cfg, {std::begin(kAllIndustries), std::end(kAllIndustries)});
    sc = calibrated_synth_config(o);
  }
  const FarmPanel panel = synth_panel(sc);
  std::size_t negative = 0;
  for (const auto& r : panel.records()) {
    if (std::any_of(r.quantities.begin(), r.quantities.end(), [](double q) { return q < 0; }) ||
        r.numeraire_quantity < 0) {
      ++negative;
    }
  }
  if (negative) {
    spdlog::warn("{} farm-years have a negative quantity; load with --allow-negative-quantities", negative);
  }
  ctx.write_csv("panel.csv", format_panel(panel));
  for (const auto& ic : sc.industries) {
    ctx.write_json(name_for("truth", ic.industry, ".json"), params_to_json(ic.truth));
  }
  ctx.write_json("synth_config.json", synth_config_to_json(sc));
}

void configure_logging() {
  static const auto logger = [] {
    auto l = spdlog::stderr_logger_st("netputsim");
    l->set_pattern("[%l] %v");
    return l;
  }();
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("NETPUTSIM_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

void print_error(std::ostream& err, std::string_view code, const std::string& message,
                 const std::vector<std::string>& details = {}) {
  Json j;
  j["error"] = {{"code", code}, {"message", message}, {"details", details}};
  err << j.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  RunConfig cfg;
  CLI::App app{"Netput profit-function estimation and price-shock simulation", std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output directory")->required();
    sub->add_option("--industry", cfg.industries, "Restrict to these industries (repeatable)");
    sub->add_option("--threads", cfg.threads, "Cap on worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--pretty", cfg.pretty, "Human-friendly number formatting");
  };
  auto panel_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--panel", cfg.panel, "Farm panel CSV")->check(CLI::ExistingFile);
    if (required) o->required();
    sub->add_flag("--allow-negative-quantities", cfg.allow_negative_quantities,
                  "Accept negative quantities (noisy synthetic panels)");
  };
  auto params_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--params", cfg.params, "Parameter JSON, one per industry (repeatable)")
                  ->check(CLI::ExistingFile);
    if (required) o->required();
  };

  auto* est = app.add_subcommand("estimate", "Estimate the netput system per industry");
  common(est);
  panel_opt(est, true);
  est->add_flag("--weighted-estimation", cfg.weighted_estimation, "Carry survey weights into estimation");
  est->add_flag("!--no-numeraire-equation", cfg.numeraire_equation, "Skip the numeraire equation");

  auto* sim = app.add_subcommand("simulate", "Apply a price scenario to a baseline panel");
  common(sim);
  params_opt(sim, true);
  panel_opt(sim, true);
  sim->add_option("--scenario", cfg.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--pct-denominator", cfg.pct_denominator, "Percentage base")
      ->check(CLI::IsMember({"scenario", "baseline"}));

  auto* ela = app.add_subcommand("elasticities", "Marginal effects and elasticities");
  common(ela);
  params_opt(ela, false);
  panel_opt(ela, false);
  ela->add_flag("--fixtures", cfg.fixtures, "Use the published effect tables and their evaluation points");
  ela->add_option("--reduction", cfg.reduction, "How marginal effects are averaged")
      ->check(CLI::IsMember({"mean", "per-farm-weighted"}));

  auto* dem = app.add_subcommand("demand-curve", "Water demand curves by area quartile");
  common(dem);
  params_opt(dem, true);
  panel_opt(dem, true);
  dem->add_option("--price-max", cfg.price_max, "Top of the price grid, $/ML")->check(CLI::PositiveNumber);
  dem->add_option("--points", cfg.points, "Grid points")->check(CLI::Range(2, 100000));

  auto* val = app.add_subcommand("validate", "Fit, monotonicity and convexity diagnostics");
  common(val);
  params_opt(val, true);
  panel_opt(val, true);

  auto* syn = app.add_subcommand("synth", "Generate a synthetic panel");
  common(syn);
  syn->add_option("--config", cfg.config, "Generator config JSON (default: calibrated panel)")
      ->check(CLI::ExistingFile);
  syn->add_option("--seed", cfg.seed, "Random seed");
  syn->add_option("--farms", cfg.farms, "Farms per industry (calibrated panel)")->check(CLI::PositiveNumber);
  syn->add_option("--noise", cfg.noise, "Noise sd as a fraction of each target (calibrated panel)")
      ->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help / --version
      app.exit(e, out, err);
      return 0;
    }
    print_error(err, "usage", e.what());
    return 1;
  }

  const std::map<CLI::App*, std::function<void(Context&)>> handlers{
      {est, cmd_estimate}, {sim, cmd_simulate},  {ela, cmd_elasticities},
      {dem, cmd_demand_curve}, {val, cmd_validate}, {syn, cmd_synth}};
  try {
    for (const auto& [sub, handler] : handlers) {
      if (!sub->parsed()) continue;
      cfg.subcommand = sub->get_name();
      if (cfg.subcommand == "elasticities" && !cfg.fixtures && (cfg.params.empty() || cfg.panel.empty())) {
        throw Error(ErrorCode::kInvalidArgument, "elasticities needs --params and --panel, or --fixtures");
      }
      Context ctx{cfg, out};
      handler(ctx);
    }
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what(), e.details());
    return 2;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return 3;
  }
  return 0;
}

}  // namespace netputsim
