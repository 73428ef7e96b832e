#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netputsim/param_io.hpp"
#include "netputsim/types.hpp"

namespace netputsim {

// value = median * exp(log_sd * N(0,1)); log_sd = 0 gives a constant.
struct LogNormalSpec {
  double median = 1.0;
  double log_sd = 0.0;
};

struct ControlSpec {
  bool bernoulli = false;  // mean is then the success probability
  double mean = 0.0;
  double sd = 0.0;
};

struct SynthIndustryConfig {
  IndustryId industry = IndustryId::kDairy;
  int farms = 0;
  ParameterSet truth;
  std::vector<double> base_prices;  // raw $/unit per netput
  double p0 = 1.0;
  double p0_year_sd = 0.03;         // log-sd of the yearly numeraire index shock
  double price_year_sd = 0.08;      // log-sd of yearly shocks, per netput
  double price_record_sd = 0.05;    // log-sd of farm-year jitter
  LogNormalSpec area;               // area operated, or total planted area
  std::vector<LogNormalSpec> fixed; // one per z_<name> column
  double fixed_year_sd = 0.05;      // log-sd of year-to-year drift in z
  std::vector<ControlSpec> controls;
  // Gaussian noise sd per equation in model units (per hectare for
  // per-hectare industries): G netput equations, then the numeraire.
  std::vector<double> noise_sd;
  double weight_lo = 1.0;
  double weight_hi = 40.0;

  void validate() const;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int year_first = 2007;
  int year_last = 2015;
  std::vector<std::string> regions;  // empty: every standard region
  double water_group_sd = 0.25;      // log-sd of allocation price per (group, year)
  std::vector<SynthIndustryConfig> industries;

  void validate() const;
};

// Draws a balanced farm-year panel whose quantities follow the model exactly
// at the sampled prices and fixed inputs, plus the configured noise.
FarmPanel synth_panel(const SynthConfig& cfg);

Json synth_config_to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const Json& j);

}  // namespace netputsim
