#pragma once

// Price-shock simulation: scenario prices per farm, farm-level quantity and
// profit changes, and weighted aggregation.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netputsim/param_io.hpp"
#include "netputsim/types.hpp"

namespace netputsim {

// Scope "all", a region name, or a water-price group name.
struct PriceOverride {
  std::string netput;  // a netput name or materials_services (P0)
  std::string scope{"all"};
  std::optional<double> factor;
  std::optional<double> absolute;  // $/unit
};

// Multiplies a model fixed input or control, by name, for every farm.
struct StateOverride {
  std::string name;
  double factor = 1.0;
};

struct Scenario {
  std::string name;
  int baseline_year = 2015;
  std::vector<PriceOverride> overrides;
  std::vector<StateOverride> state_overrides;

  // Throws kValidation listing every problem.
  void validate() const;
};

Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

// Uniform factor on one netput price everywhere.
Scenario price_factor_scenario(std::string netput, double factor, std::string name = "");

// Scenario prices for every record. When several overrides touch the same
// price the most specific scope wins (region, then group, then all).
std::vector<PriceVector> apply_scenario(const FarmPanel& baseline, const Scenario& scenario);

// Everything the model conditions on for one farm-year.
struct FarmState {
  PriceVector prices;
  Vector z;
  Vector w;
};

FarmState baseline_state(const IndustrySpec& spec, const FarmRecord& farm);
// Baseline state with the scenario's prices and fixed-input/control factors.
FarmState scenario_state(const IndustrySpec& spec, const FarmRecord& farm,
                         const PriceVector& prices, const Scenario& scenario);

// Quantity convention (inputs positive), farm level, netputs then x_m.
struct FarmDelta {
  std::string farm_id;
  int year = 0;
  IndustryId industry = IndustryId::kDairy;
  std::string region;
  double weight = 1.0;
  std::vector<std::string> labels;
  Vector q0;  // model-predicted baseline
  Vector dq;
  Vector q1;  // q0 + dq
  PriceVector p0;
  PriceVector p1;
  double profit0 = 0.0;
  double dprofit = 0.0;
  double profit1 = 0.0;

  // $ value of each slot (revenue for outputs, cost for inputs).
  Vector value0() const;
  Vector value1() const;
};

// Quantities only; profit fields are left for profit_delta. The quantity
// change is C (p1 - p0) in normalised prices plus the fixed-input and control
// terms; x_m changes by (C pbar)'(p1 - p0) at the midpoint pbar, which is
// exact for the quadratic form.
FarmDelta farm_deltas(const ParameterSet& params, const FarmRecord& farm, const FarmState& s0,
                      const FarmState& s1);
FarmDelta farm_deltas(const ParameterSet& params, const FarmRecord& farm, const PriceVector& p0,
                      const PriceVector& p1);

struct ProfitDelta {
  double delta = 0.0;
  double profit0 = 0.0;
  double profit1 = 0.0;
};

// Profit = revenue - cost over every netput and the numeraire, water at its
// price. The change is sum dq * P0 + q1 * dP per slot; p0/p1 must be the
// prices the delta was computed with.
ProfitDelta profit_delta(const FarmDelta& delta, const PriceVector& p0, const PriceVector& p1);
// farm_deltas followed by profit_delta, filling the profit fields.
FarmDelta simulate_farm(const ParameterSet& params, const FarmRecord& farm, const FarmState& s0,
                        const FarmState& s1);

enum class PctDenominator { kScenario, kBaseline };
std::string_view to_string(PctDenominator d);
PctDenominator parse_pct_denominator(std::string_view name);
// 100 * change / (scenario or baseline level); NaN for a zero denominator.
double pct_change(double change, double baseline, double scenario, PctDenominator d);

struct NetputAggregate {
  std::string name;
  double baseline = 0.0;
  double change = 0.0;
  double scenario = 0.0;
  double pct_scenario = 0.0;  // 100 * change / scenario
  double pct_baseline = 0.0;  // 100 * change / baseline
};

enum class Grouping { kIndustry, kRegion, kWhole };

struct AggregateResult {
  std::string key;
  std::size_t farms = 0;
  double weight = 0.0;
  std::vector<NetputAggregate> netputs;  // weighted level sums by netput name
  double profit0 = 0.0;
  double dprofit = 0.0;
  double profit1 = 0.0;
  double pct_profit_scenario = 0.0;
  double pct_profit_baseline = 0.0;
};

// Groups in first-seen order; fixed summation order.
std::vector<AggregateResult> aggregate(const std::vector<FarmDelta>& deltas, Grouping grouping);

struct DecompositionLine {
  std::string item;
  double baseline = 0.0;  // weighted average per farm
  double scenario = 0.0;
  double change = 0.0;
  double pct_scenario = 0.0;
  double pct_baseline = 0.0;
};

struct DecompositionTable {
  IndustryId industry = IndustryId::kDairy;
  std::vector<DecompositionLine> lines;  // "<input> cost"..., total cost, total revenue, profit
};

// One table per industry present, in standard industry order.
std::vector<DecompositionTable> decompose(const std::vector<FarmDelta>& deltas);

struct SimulationResult {
  Scenario scenario;
  std::vector<FarmDelta> farms;
  std::vector<AggregateResult> by_industry;
  std::vector<AggregateResult> by_region;
  AggregateResult whole;
  std::vector<DecompositionTable> decomposition;
};

// Baseline-year records of every industry with parameters; baseline
// quantities are model predictions.
SimulationResult simulate(const std::map<IndustryId, ParameterSet>& params,
                          const FarmPanel& panel, const Scenario& scenario);

std::string farm_deltas_csv(const std::vector<FarmDelta>& deltas, bool pretty = false);
std::string region_profit_csv(const std::vector<AggregateResult>& regions, PctDenominator d,
                              bool pretty = false);
Json simulation_to_json(const SimulationResult& result, PctDenominator d);

}  // namespace netputsim
