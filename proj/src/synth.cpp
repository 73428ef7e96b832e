#include "netputsim/synth.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <set>

#include "netputsim/error.hpp"
#include "netputsim/netput.hpp"
#include "netputsim/random.hpp"

namespace netputsim {

void SynthIndustryConfig::validate() const {
  const IndustrySpec& spec = industry_spec(industry);
  std::vector<std::string> problems;
  try {
    truth.validate();
  } catch (const Error& e) {
    problems.push_back(std::string("truth: ") + e.what());
  }
  if (truth.netput_count() != spec.netput_count()) problems.push_back("truth has wrong netput count");
  if (truth.fixed_count() != spec.fixed_count()) problems.push_back("truth has wrong fixed-input count");
  if (truth.control_count() != spec.control_count()) problems.push_back("truth has wrong control count");
  if (base_prices.size() != spec.netput_count()) problems.push_back("base_prices length differs from G");
  for (double p : base_prices) {
    if (!(p > 0.0)) problems.push_back("base prices must be positive");
  }
  if (!(p0 > 0.0)) problems.push_back("p0 must be positive");
  if (fixed.size() != spec.fixed_column_names().size()) problems.push_back("fixed distribution count differs");
  if (controls.size() != spec.control_count()) problems.push_back("control distribution count differs");
  if (noise_sd.size() != spec.netput_count() + 1) problems.push_back("noise_sd needs G + 1 entries");
  for (double s : noise_sd) {
    if (!(s >= 0.0)) problems.push_back("noise sd must be nonnegative");
  }
  if (farms < 0) problems.push_back("farm count must be nonnegative");
  if (!(fixed_year_sd >= 0.0)) problems.push_back("fixed_year_sd must be nonnegative");
  if (!(area.median > 0.0)) problems.push_back("area median must be positive");
  if (!(weight_lo > 0.0) || weight_hi < weight_lo) problems.push_back("bad weight range");
  if (!problems.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "invalid synthetic config for " + std::string(to_string(industry)), problems);
  }
}

void SynthConfig::validate() const {
  if (year_last < year_first) throw Error(ErrorCode::kInvalidArgument, "empty year range");
  const auto& groups = standard_region_price_groups();
  for (const auto& r : regions) {
    if (!groups.count(r)) throw Error(ErrorCode::kUnknownRegion, "unknown region '" + r + "'");
  }
  for (const auto& ic : industries) ic.validate();
}

namespace {

double draw(Rng& rng, const LogNormalSpec& s) {
  // Always consume one variate so the stream layout does not depend on sd.
  const double n = rng.normal();
  return s.median * std::exp(s.log_sd * n);
}

double draw(Rng& rng, const ControlSpec& s) {
  if (s.bernoulli) return rng.uniform() < s.mean ? 1.0 : 0.0;
  return rng.normal(s.mean, s.sd);
}

std::string farm_prefix(IndustryId id) {
  switch (id) {
    case IndustryId::kDairy: return "D";
    case IndustryId::kBroadacreRice: return "R";
    case IndustryId::kBroadacreNonRice: return "B";
    case IndustryId::kHorticulture: return "H";
  }
  return "X";
}

}  // namespace

FarmPanel synth_panel(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto& group_of = standard_region_price_groups();
  std::vector<std::string> regions = cfg.regions;
  if (regions.empty()) {
    for (const auto& [r, g] : group_of) regions.push_back(r);
  }
  const int years = cfg.year_last - cfg.year_first + 1;

  // Allocation water price factor per (group, year), shared by industries.
  std::set<std::string> groups;
  for (const auto& r : regions) groups.insert(group_of.at(r));
  std::map<std::pair<std::string, int>, double> water_factor;
  for (const auto& g : groups) {
    for (int y = cfg.year_first; y <= cfg.year_last; ++y) {
      water_factor[{g, y}] = std::exp(cfg.water_group_sd * rng.normal());
    }
  }
  std::vector<double> p0_factor(static_cast<std::size_t>(years));
  for (double& f : p0_factor) f = rng.normal();

  std::vector<FarmRecord> records;
  for (const SynthIndustryConfig& ic : cfg.industries) {
    const IndustrySpec& spec = industry_spec(ic.industry);
    const std::size_t g = spec.netput_count();
    const std::size_t water = spec.water_index();
    const auto labour = spec.netput_index("labour");

    std::vector<std::vector<double>> year_shock(static_cast<std::size_t>(years),
                                                std::vector<double>(g));
    for (auto& row : year_shock) {
      for (double& s : row) s = std::exp(ic.price_year_sd * rng.normal());
    }

    for (int f = 0; f < ic.farms; ++f) {
      FarmRecord base;
      base.industry = ic.industry;
      base.farm_id = fmt::format("{}{:05d}", farm_prefix(ic.industry), f + 1);
      base.region = regions[rng.index(regions.size())];
      base.weight = rng.uniform(ic.weight_lo, ic.weight_hi);
      const double area = draw(rng, ic.area);
      if (spec.area_rule == AreaRule::kTotalHorticulturalArea) {
        std::vector<double> u(spec.output_count());
        double total = 0.0;
        for (double& x : u) total += (x = rng.uniform(0.2, 1.0));
        for (double x : u) base.output_areas.push_back(area * x / total);
        base.area_operated = area * rng.uniform(1.0, 1.3);
      } else {
        base.area_operated = area;
      }
      for (const auto& fs : ic.fixed) base.fixed.push_back(draw(rng, fs));

      for (int yi = 0; yi < years; ++yi) {
        FarmRecord rec = base;
        rec.year = cfg.year_first + yi;
        const auto uy = static_cast<std::size_t>(yi);
        rec.p0 = ic.p0 * std::exp(ic.p0_year_sd * p0_factor[uy]);
        rec.raw_prices.resize(g);
        for (std::size_t i = 0; i < g; ++i) {
          double shock = year_shock[uy][i];
          if (i == water) shock = water_factor.at({group_of.at(rec.region), rec.year});
          rec.raw_prices[i] = ic.base_prices[i] * shock * std::exp(ic.price_record_sd * rng.normal());
        }
        for (double& z : rec.fixed) z *= std::exp(ic.fixed_year_sd * rng.normal());
        for (const auto& cs : ic.controls) rec.controls.push_back(draw(rng, cs));

        const Vector p = rec.prices().normalized();
        const Vector z = model_fixed_inputs(spec, rec);
        const Vector w = model_controls(rec);
        const Vector net = netput_values(ic.truth, p, z, w);
        const double xm = numeraire_quantity(ic.truth, p, z, w);
        const double scale = area_divisor(spec, rec);
        rec.quantities.resize(g);
        for (std::size_t i = 0; i < g; ++i) {
          const double noisy = net[static_cast<Eigen::Index>(i)] + ic.noise_sd[i] * rng.normal();
          rec.quantities[i] = spec.sign(i) * noisy * scale;
        }
        rec.numeraire_quantity = (xm + ic.noise_sd[g] * rng.normal()) * scale;
        const double wage_noise = std::exp(0.3 * rng.normal());
        if (labour && rec.quantities[*labour] > 0.0) {
          rec.wages_paid = rec.quantities[*labour] * rec.raw_prices[*labour] * wage_noise;
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return FarmPanel(std::move(records));
}

// ---------------------------------------------------------------------------

namespace {

Json to_json(const LogNormalSpec& s) { return {{"median", s.median}, {"log_sd", s.log_sd}}; }
Json to_json(const ControlSpec& s) {
  return {{"bernoulli", s.bernoulli}, {"mean", s.mean}, {"sd", s.sd}};
}

}  // namespace

Json synth_config_to_json(const SynthConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["year_first"] = cfg.year_first;
  j["year_last"] = cfg.year_last;
  j["regions"] = cfg.regions;
  j["water_group_sd"] = cfg.water_group_sd;
  j["industries"] = Json::array();
  for (const auto& ic : cfg.industries) {
    Json k;
    k["industry"] = std::string(to_string(ic.industry));
    k["farms"] = ic.farms;
    k["truth"] = params_to_json(ic.truth);
    k["base_prices"] = ic.base_prices;
    k["p0"] = ic.p0;
    k["p0_year_sd"] = ic.p0_year_sd;
    k["price_year_sd"] = ic.price_year_sd;
    k["price_record_sd"] = ic.price_record_sd;
    k["area"] = to_json(ic.area);
    k["fixed_year_sd"] = ic.fixed_year_sd;
    k["fixed"] = Json::array();
    for (const auto& f : ic.fixed) k["fixed"].push_back(to_json(f));
    k["controls"] = Json::array();
    for (const auto& c : ic.controls) k["controls"].push_back(to_json(c));
    k["noise_sd"] = ic.noise_sd;
    k["weight_lo"] = ic.weight_lo;
    k["weight_hi"] = ic.weight_hi;
    j["industries"].push_back(std::move(k));
  }
  return j;
}

SynthConfig synth_config_from_json(const Json& j) {
  try {
    SynthConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.year_first = j.value("year_first", cfg.year_first);
    cfg.year_last = j.value("year_last", cfg.year_last);
    cfg.regions = j.value("regions", cfg.regions);
    cfg.water_group_sd = j.value("water_group_sd", cfg.water_group_sd);
    for (const Json& k : j.at("industries")) {
      SynthIndustryConfig ic;
      ic.industry = parse_industry(k.at("industry").get<std::string>());
      ic.farms = k.at("farms").get<int>();
      ic.truth = params_from_json(k.at("truth"));
      ic.base_prices = k.at("base_prices").get<std::vector<double>>();
      ic.p0 = k.value("p0", ic.p0);
      ic.p0_year_sd = k.value("p0_year_sd", ic.p0_year_sd);
      ic.price_year_sd = k.value("price_year_sd", ic.price_year_sd);
      ic.price_record_sd = k.value("price_record_sd", ic.price_record_sd);
      ic.area = {k.at("area").at("median").get<double>(), k.at("area").at("log_sd").get<double>()};
      ic.fixed_year_sd = k.value("fixed_year_sd", ic.fixed_year_sd);
      for (const Json& f : k.at("fixed")) {
        ic.fixed.push_back({f.at("median").get<double>(), f.at("log_sd").get<double>()});
      }
      for (const Json& c : k.at("controls")) {
        ic.controls.push_back({c.value("bernoulli", false), c.at("mean").get<double>(),
                               c.value("sd", 0.0)});
      }
      ic.noise_sd = k.at("noise_sd").get<std::vector<double>>();
      ic.weight_lo = k.value("weight_lo", ic.weight_lo);
      ic.weight_hi = k.value("weight_hi", ic.weight_hi);
      cfg.industries.push_back(std::move(ic));
    }
    cfg.validate();
    return cfg;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid synthetic config: ") + e.what());
  }
}

}  // namespace netputsim
