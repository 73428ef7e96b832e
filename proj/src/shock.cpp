#include "netputsim/shock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "netputsim/csv.hpp"
#include "netputsim/error.hpp"
#include "netputsim/netput.hpp"

namespace netputsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_region(const std::string& s) { return standard_region_price_groups().count(s) > 0; }

bool is_group(const std::string& s) {
  for (const auto& [r, g] : standard_region_price_groups()) {
    if (g == s) return true;
  }
  return false;
}

// 0 = all, 1 = price group, 2 = region.
int specificity(const std::string& scope) {
  if (scope == "all") return 0;
  return is_region(scope) ? 2 : 1;
}

bool in_scope(const std::string& scope, const std::string& region) {
  if (scope == "all" || scope == region) return true;
  auto it = standard_region_price_groups().find(region);
  return it != standard_region_price_groups().end() && it->second == scope;
}

}  // namespace

void Scenario::validate() const {
  std::vector<std::string> unknown;
  for (const auto& o : overrides) {
    if (o.scope != "all" && !is_region(o.scope) && !is_group(o.scope)) unknown.push_back(o.scope);
  }
  if (!unknown.empty()) {
    throw Error(ErrorCode::kUnknownRegion, "scenario names an unknown region or price group",
                unknown);
  }
  std::vector<std::string> problems;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& o : overrides) {
    const std::string tag = o.netput + "@" + o.scope;
    if (o.factor.has_value() == o.absolute.has_value()) {
      problems.push_back(tag + ": give exactly one of factor and absolute");
    }
    if (o.factor && !(*o.factor > 0.0 && std::isfinite(*o.factor))) {
      problems.push_back(tag + ": factor must be positive");
    }
    if (o.absolute && !(*o.absolute > 0.0 && std::isfinite(*o.absolute))) {
      problems.push_back(tag + ": absolute price must be positive");
    }
    if (!seen.insert({o.netput, o.scope}).second) problems.push_back(tag + ": duplicate override");
  }
  for (const auto& s : state_overrides) {
    if (!(s.factor > 0.0 && std::isfinite(s.factor))) {
      problems.push_back(s.name + ": factor must be positive");
    }
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kValidation, "invalid scenario '" + name + "'", problems);
  }
}

Scenario scenario_from_json(const Json& j) {
  try {
    Scenario s;
    s.name = j.value("name", std::string());
    s.baseline_year = j.value("baseline_year", s.baseline_year);
    for (const Json& o : j.value("overrides", Json::array())) {
      PriceOverride po;
      po.netput = o.at("netput").get<std::string>();
      po.scope = o.value("scope", po.scope);
      if (o.contains("factor")) po.factor = o.at("factor").get<double>();
      if (o.contains("absolute")) po.absolute = o.at("absolute").get<double>();
      s.overrides.push_back(std::move(po));
    }
    for (const Json& o : j.value("state_overrides", Json::array())) {
      s.state_overrides.push_back({o.at("name").get<std::string>(), o.at("factor").get<double>()});
    }
    s.validate();
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid scenario: ") + e.what());
  }
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["baseline_year"] = s.baseline_year;
  j["overrides"] = Json::array();
  for (const auto& o : s.overrides) {
    Json x{{"netput", o.netput}, {"scope", o.scope}};
    if (o.factor) x["factor"] = *o.factor;
    if (o.absolute) x["absolute"] = *o.absolute;
    j["overrides"].push_back(std::move(x));
  }
  j["state_overrides"] = Json::array();
  for (const auto& o : s.state_overrides) {
    j["state_overrides"].push_back({{"name", o.name}, {"factor", o.factor}});
  }
  return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path));
}

Scenario price_factor_scenario(std::string netput, double factor, std::string name) {
  Scenario s;
  s.name = name.empty() ? netput + " x" + csv::format_number(factor, true) : std::move(name);
  s.overrides.push_back({std::move(netput), "all", factor, std::nullopt});
  return s;
}

std::vector<PriceVector> apply_scenario(const FarmPanel& baseline, const Scenario& scenario) {
  scenario.validate();
  const auto& recs = baseline.records();
  std::vector<std::size_t> hits(scenario.overrides.size(), 0);
  std::vector<PriceVector> out;
  out.reserve(recs.size());
  for (const FarmRecord& r : recs) {
    const IndustrySpec& spec = industry_spec(r.industry);
    Vector raw = Eigen::Map<const Vector>(r.raw_prices.data(),
                                          static_cast<Eigen::Index>(r.raw_prices.size()));
    double p0 = r.p0;
    const auto g = static_cast<Eigen::Index>(spec.netput_count());
    std::vector<int> best(static_cast<std::size_t>(g + 1), -1);
    std::vector<std::size_t> which(static_cast<std::size_t>(g + 1), 0);
    for (std::size_t k = 0; k < scenario.overrides.size(); ++k) {
      const PriceOverride& o = scenario.overrides[k];
      if (!in_scope(o.scope, r.region)) continue;
      Eigen::Index slot = -1;
      if (o.netput == spec.numeraire_name) {
        slot = g;
      } else if (auto i = spec.netput_index(o.netput)) {
        slot = static_cast<Eigen::Index>(*i);
      } else {
        continue;
      }
      const int s = specificity(o.scope);
      auto& b = best[static_cast<std::size_t>(slot)];
      if (s > b) {
        b = s;
        which[static_cast<std::size_t>(slot)] = k;
      }
    }
    for (Eigen::Index slot = 0; slot <= g; ++slot) {
      if (best[static_cast<std::size_t>(slot)] < 0) continue;
      const std::size_t k = which[static_cast<std::size_t>(slot)];
      const PriceOverride& o = scenario.overrides[k];
      ++hits[k];
      double& price = slot == g ? p0 : raw[slot];
      price = o.factor ? price * *o.factor : *o.absolute;
    }
    out.emplace_back(std::move(raw), p0);
  }

  std::vector<std::string> unresolved;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (hits[k] > 0) continue;
    const auto& o = scenario.overrides[k];
    // Overridden by a more specific scope everywhere still counts as resolved.
    bool named = false, scoped = false;
    for (const FarmRecord& r : recs) {
      const IndustrySpec& spec = industry_spec(r.industry);
      const bool has = o.netput == spec.numeraire_name || spec.netput_index(o.netput).has_value();
      named = named || has;
      scoped = scoped || (has && in_scope(o.scope, r.region));
    }
    if (!named) {
      throw Error(ErrorCode::kUnknownNetput,
                  "scenario overrides unknown netput '" + o.netput + "'");
    }
    if (!scoped) unresolved.push_back(o.netput + "@" + o.scope);
  }
  if (!unresolved.empty()) {
    throw Error(ErrorCode::kEmptyInput, "scenario overrides match no farm", unresolved);
  }
  return out;
}

FarmState baseline_state(const IndustrySpec& spec, const FarmRecord& farm) {
  return {farm.prices(), model_fixed_inputs(spec, farm), model_controls(farm)};
}

FarmState scenario_state(const IndustrySpec& spec, const FarmRecord& farm,
                         const PriceVector& prices, const Scenario& scenario) {
  FarmState s = baseline_state(spec, farm);
  s.prices = prices;
  const auto fixed = spec.fixed_input_names();
  for (const auto& o : scenario.state_overrides) {
    for (std::size_t f = 0; f < fixed.size(); ++f) {
      if (fixed[f] == o.name) s.z[static_cast<Eigen::Index>(f)] *= o.factor;
    }
    for (std::size_t c = 0; c < spec.control_names.size(); ++c) {
      if (spec.control_names[c] == o.name) s.w[static_cast<Eigen::Index>(c)] *= o.factor;
    }
  }
  return s;
}

Vector FarmDelta::value0() const {
  Vector prices(q0.size());
  prices.head(q0.size() - 1) = p0.raw();
  prices[q0.size() - 1] = p0.p0();
  return q0.cwiseProduct(prices);
}

Vector FarmDelta::value1() const {
  Vector prices(q1.size());
  prices.head(q1.size() - 1) = p1.raw();
  prices[q1.size() - 1] = p1.p0();
  return q1.cwiseProduct(prices);
}

FarmDelta farm_deltas(const ParameterSet& params, const FarmRecord& farm, const FarmState& s0,
                      const FarmState& s1) {
  if (params.industry != farm.industry) {
    throw Error(ErrorCode::kIndustryMismatch,
                "parameters are for " + std::string(to_string(params.industry)) + ", farm " +
                    farm.farm_id + " is " + std::string(to_string(farm.industry)));
  }
  const IndustrySpec& spec = industry_spec(farm.industry);
  const Vector x0 = s0.prices.normalized();
  const Vector x1 = s1.prices.normalized();
  const Vector dx = x1 - x0;
  const Vector dz = s1.z - s0.z;
  const Vector dw = s1.w - s0.w;

  Vector dn = params.C * dx + params.alpha * dz;
  if (dw.size() != 0) dn += params.gamma * dw;
  const Vector mid = 0.5 * (x0 + x1);
  double dxm = (params.C * mid).dot(dx) - params.b.dot(dz) -
               0.5 * (s1.z.dot(params.D * s1.z) - s0.z.dot(params.D * s0.z));
  if (dw.size() != 0) dxm -= params.gamma_m.dot(dw);

  const double scale = spec.per_hectare ? area_divisor(spec, farm) : 1.0;
  const Vector n0 = netput_values(params, x0, s0.z, s0.w);
  const double xm0 = numeraire_quantity(params, x0, s0.z, s0.w);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());

  FarmDelta d;
  d.farm_id = farm.farm_id;
  d.year = farm.year;
  d.industry = farm.industry;
  d.region = farm.region;
  d.weight = farm.weight;
  d.labels = spec.netput_names();
  d.labels.push_back(spec.numeraire_name);
  d.q0.resize(g + 1);
  d.dq.resize(g + 1);
  for (Eigen::Index i = 0; i < g; ++i) {
    const double s = spec.sign(static_cast<std::size_t>(i));
    d.q0[i] = s * n0[i] * scale;
    d.dq[i] = s * dn[i] * scale;
  }
  d.q0[g] = xm0 * scale;
  d.dq[g] = dxm * scale;
  d.q1 = d.q0 + d.dq;
  d.p0 = s0.prices;
  d.p1 = s1.prices;
  return d;
}

FarmDelta farm_deltas(const ParameterSet& params, const FarmRecord& farm, const PriceVector& p0,
                      const PriceVector& p1) {
  const IndustrySpec& spec = industry_spec(farm.industry);
  FarmState s0 = baseline_state(spec, farm);
  FarmState s1 = s0;
  s0.prices = p0;
  s1.prices = p1;
  return farm_deltas(params, farm, s0, s1);
}

ProfitDelta profit_delta(const FarmDelta& delta, const PriceVector& p0, const PriceVector& p1) {
  if (delta.p0.raw() != p0.raw() || delta.p0.p0() != p0.p0() || delta.p1.raw() != p1.raw() ||
      delta.p1.p0() != p1.p0()) {
    throw Error(ErrorCode::kInvalidArgument,
                "prices differ from those the quantity change for " + delta.farm_id +
                    " was computed with");
  }
  const IndustrySpec& spec = industry_spec(delta.industry);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  ProfitDelta out;
  for (Eigen::Index i = 0; i <= g; ++i) {
    const double s = i < g ? spec.sign(static_cast<std::size_t>(i)) : -1.0;
    const double a = i < g ? p0.raw()[i] : p0.p0();
    const double b = i < g ? p1.raw()[i] : p1.p0();
    out.profit0 += s * delta.q0[i] * a;
    out.delta += s * (delta.dq[i] * a + delta.q1[i] * (b - a));
  }
  out.profit1 = out.profit0 + out.delta;
  return out;
}

FarmDelta simulate_farm(const ParameterSet& params, const FarmRecord& farm, const FarmState& s0,
                        const FarmState& s1) {
  FarmDelta d = farm_deltas(params, farm, s0, s1);
  const ProfitDelta p = profit_delta(d, s0.prices, s1.prices);
  d.profit0 = p.profit0;
  d.dprofit = p.delta;
  d.profit1 = p.profit1;
  return d;
}

std::string_view to_string(PctDenominator d) {
  return d == PctDenominator::kScenario ? "scenario" : "baseline";
}

PctDenominator parse_pct_denominator(std::string_view name) {
  if (name == "scenario") return PctDenominator::kScenario;
  if (name == "baseline") return PctDenominator::kBaseline;
  throw Error(ErrorCode::kInvalidArgument,
              "percentage denominator must be scenario or baseline, got '" + std::string(name) + "'");
}

double pct_change(double change, double baseline, double scenario, PctDenominator d) {
  const double denom = d == PctDenominator::kScenario ? scenario : baseline;
  return denom == 0.0 ? kNaN : change * 100.0 / denom;
}

std::vector<AggregateResult> aggregate(const std::vector<FarmDelta>& deltas, Grouping grouping) {
  if (deltas.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to aggregate");
  std::vector<AggregateResult> groups;
  auto group_for = [&](const std::string& key) -> AggregateResult& {
    for (auto& g : groups) {
      if (g.key == key) return g;
    }
    groups.push_back({});
    groups.back().key = key;
    return groups.back();
  };
  for (const FarmDelta& d : deltas) {
    const std::string key = grouping == Grouping::kIndustry ? std::string(to_string(d.industry))
                            : grouping == Grouping::kRegion ? d.region
                                                            : std::string("all");
    AggregateResult& a = group_for(key);
    a.farms += 1;
    a.weight += d.weight;
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
      auto it = std::find_if(a.netputs.begin(), a.netputs.end(),
                             [&](const NetputAggregate& n) { return n.name == d.labels[i]; });
      if (it == a.netputs.end()) {
        a.netputs.push_back({d.labels[i]});
        it = a.netputs.end() - 1;
      }
      const auto k = static_cast<Eigen::Index>(i);
      it->baseline += d.weight * d.q0[k];
      it->change += d.weight * d.dq[k];
      it->scenario += d.weight * d.q1[k];
    }
    a.profit0 += d.weight * d.profit0;
    a.dprofit += d.weight * d.dprofit;
    a.profit1 += d.weight * d.profit1;
  }
  for (auto& a : groups) {
    for (auto& n : a.netputs) {
      n.pct_scenario = pct_change(n.change, n.baseline, n.scenario, PctDenominator::kScenario);
      n.pct_baseline = pct_change(n.change, n.baseline, n.scenario, PctDenominator::kBaseline);
    }
    a.pct_profit_scenario = pct_change(a.dprofit, a.profit0, a.profit1, PctDenominator::kScenario);
    a.pct_profit_baseline = pct_change(a.dprofit, a.profit0, a.profit1, PctDenominator::kBaseline);
  }
  return groups;
}

std::vector<DecompositionTable> decompose(const std::vector<FarmDelta>& deltas) {
  if (deltas.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to decompose");
  std::vector<DecompositionTable> tables;
  for (IndustryId id : kAllIndustries) {
    const IndustrySpec& spec = industry_spec(id);
    const auto g = static_cast<Eigen::Index>(spec.netput_count());
    Vector v0 = Vector::Zero(g + 1), v1 = Vector::Zero(g + 1);
    double wsum = 0.0;
    for (const FarmDelta& d : deltas) {
      if (d.industry != id) continue;
      v0 += d.weight * d.value0();
      v1 += d.weight * d.value1();
      wsum += d.weight;
    }
    if (wsum == 0.0) continue;
    v0 /= wsum;
    v1 /= wsum;
    DecompositionTable t;
    t.industry = id;
    auto line = [](std::string item, double b, double s) {
      DecompositionLine l{std::move(item), b, s, s - b};
      l.pct_scenario = pct_change(l.change, b, s, PctDenominator::kScenario);
      l.pct_baseline = pct_change(l.change, b, s, PctDenominator::kBaseline);
      return l;
    };
    double cost0 = 0.0, cost1 = 0.0, rev0 = 0.0, rev1 = 0.0;
    for (Eigen::Index i = 0; i <= g; ++i) {
      const bool output = i < g && spec.role(static_cast<std::size_t>(i)) == NetputRole::kOutput;
      if (output) {
        rev0 += v0[i];
        rev1 += v1[i];
        continue;
      }
      const std::string name =
          i < g ? spec.netput(static_cast<std::size_t>(i)).name : spec.numeraire_name;
      t.lines.push_back(line(name + " cost", v0[i], v1[i]));
      cost0 += v0[i];
      cost1 += v1[i];
    }
    t.lines.push_back(line("total cost", cost0, cost1));
    t.lines.push_back(line("total revenue", rev0, rev1));
    t.lines.push_back(line("profit", rev0 - cost0, rev1 - cost1));
    tables.push_back(std::move(t));
  }
  return tables;
}

SimulationResult simulate(const std::map<IndustryId, ParameterSet>& params,
                          const FarmPanel& panel, const Scenario& scenario) {
  scenario.validate();
  std::vector<FarmRecord> base;
  for (const FarmRecord& r : panel.records()) {
    if (r.year == scenario.baseline_year && params.count(r.industry)) base.push_back(r);
  }
  if (base.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no baseline records for year " +
                                            std::to_string(scenario.baseline_year) +
                                            " in industries with parameters");
  }
  std::vector<std::string> unknown;
  for (const auto& o : scenario.state_overrides) {
    bool found = false;
    for (const auto& [id, p] : params) {
      const IndustrySpec& spec = industry_spec(id);
      const auto fixed = spec.fixed_input_names();
      found = found || std::find(fixed.begin(), fixed.end(), o.name) != fixed.end() ||
              std::find(spec.control_names.begin(), spec.control_names.end(), o.name) !=
                  spec.control_names.end();
    }
    if (!found) unknown.push_back(o.name);
  }
  if (!unknown.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "state overrides name no fixed input or control",
                unknown);
  }
  const FarmPanel baseline(std::move(base));
  const std::vector<PriceVector> prices = apply_scenario(baseline, scenario);

  SimulationResult out;
  out.scenario = scenario;
  const auto& recs = baseline.records();
  out.farms.reserve(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const FarmRecord& r = recs[i];
    const IndustrySpec& spec = industry_spec(r.industry);
    out.farms.push_back(simulate_farm(params.at(r.industry), r, baseline_state(spec, r),
                                      scenario_state(spec, r, prices[i], scenario)));
  }
  out.by_industry = aggregate(out.farms, Grouping::kIndustry);
  out.by_region = aggregate(out.farms, Grouping::kRegion);
  out.whole = aggregate(out.farms, Grouping::kWhole).front();
  out.decomposition = decompose(out.farms);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json aggregate_json(const AggregateResult& a, PctDenominator d) {
  const bool sc = d == PctDenominator::kScenario;
  Json j{{"key", a.key}, {"farms", a.farms}, {"weight", a.weight}};
  j["netputs"] = Json::array();
  for (const auto& n : a.netputs) {
    j["netputs"].push_back({{"name", n.name},
                            {"baseline", num(n.baseline)},
                            {"change", num(n.change)},
                            {"scenario", num(n.scenario)},
                            {"pct_change", num(sc ? n.pct_scenario : n.pct_baseline)}});
  }
  j["profit"] = {{"baseline", num(a.profit0)},
                 {"change", num(a.dprofit)},
                 {"scenario", num(a.profit1)},
                 {"pct_change", num(sc ? a.pct_profit_scenario : a.pct_profit_baseline)}};
  return j;
}

std::string cell(double v, bool pretty) {
  return std::isfinite(v) ? csv::format_number(v, pretty) : "";
}

}  // namespace

std::string farm_deltas_csv(const std::vector<FarmDelta>& deltas, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"farm_id", "year", "industry", "region", "weight", "item", "price_baseline",
                       "price_scenario", "baseline", "change", "scenario"});
  for (const FarmDelta& d : deltas) {
    const std::vector<std::string> key{d.farm_id, std::to_string(d.year),
                                       std::string(to_string(d.industry)), d.region,
                                       cell(d.weight, pretty)};
    const auto g = d.q0.size() - 1;
    for (Eigen::Index i = 0; i < d.q0.size(); ++i) {
      auto row = key;
      row.push_back(d.labels[static_cast<std::size_t>(i)]);
      row.push_back(cell(i < g ? d.p0.raw()[i] : d.p0.p0(), pretty));
      row.push_back(cell(i < g ? d.p1.raw()[i] : d.p1.p0(), pretty));
      row.push_back(cell(d.q0[i], pretty));
      row.push_back(cell(d.dq[i], pretty));
      row.push_back(cell(d.q1[i], pretty));
      csv::write_row(out, row);
    }
    auto row = key;
    for (const auto& s : {std::string("profit"), std::string(), std::string(),
                          cell(d.profit0, pretty), cell(d.dprofit, pretty), cell(d.profit1, pretty)}) {
      row.push_back(s);
    }
    csv::write_row(out, row);
  }
  return out.str();
}

std::string region_profit_csv(const std::vector<AggregateResult>& regions, PctDenominator d,
                              bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"region", "farms", "weight", "profit_baseline", "profit_change",
                       "profit_scenario", "pct_change"});
  for (const auto& a : regions) {
    csv::write_row(out, {a.key, std::to_string(a.farms), cell(a.weight, pretty),
                         cell(a.profit0, pretty), cell(a.dprofit, pretty), cell(a.profit1, pretty),
                         cell(d == PctDenominator::kScenario ? a.pct_profit_scenario
                                                             : a.pct_profit_baseline,
                              pretty)});
  }
  return out.str();
}

Json simulation_to_json(const SimulationResult& result, PctDenominator d) {
  Json j;
  j["scenario"] = scenario_to_json(result.scenario);
  j["pct_denominator"] = std::string(to_string(d));
  j["baseline_quantities"] = "model predictions";
  j["whole"] = aggregate_json(result.whole, d);
  j["industries"] = Json::array();
  for (const auto& a : result.by_industry) j["industries"].push_back(aggregate_json(a, d));
  j["regions"] = Json::array();
  for (const auto& a : result.by_region) j["regions"].push_back(aggregate_json(a, d));
  j["decomposition"] = Json::array();
  for (const auto& t : result.decomposition) {
    Json lines = Json::array();
    for (const auto& l : t.lines) {
      lines.push_back({{"item", l.item},
                       {"baseline", num(l.baseline)},
                       {"scenario", num(l.scenario)},
                       {"change", num(l.change)},
                       {"pct_change", num(d == PctDenominator::kScenario ? l.pct_scenario
                                                                         : l.pct_baseline)}});
    }
    j["decomposition"].push_back(
        {{"industry", std::string(to_string(t.industry))}, {"lines", std::move(lines)}});
  }
  return j;
}

}  // namespace netputsim
