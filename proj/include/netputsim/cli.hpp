#pragma once

// Command-line front end. run_cli is the whole program minus main(), so
// tests can drive it in-process.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netputsim/industry.hpp"
#include "netputsim/param_io.hpp"

namespace netputsim {

inline constexpr std::string_view kToolName = "netputsim";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunConfig {
  std::string subcommand;
  std::string panel;
  std::vector<std::string> params;
  std::string scenario;
  std::string config;  // synth: generator config JSON
  std::vector<std::string> industries;
  std::string out;
  std::uint64_t seed = 1;
  bool weighted_estimation = false;
  bool numeraire_equation = true;
  bool allow_negative_quantities = false;
  std::string pct_denominator{"scenario"};
  std::string reduction{"per-farm-weighted"};
  bool fixtures = false;           // elasticities: published fixture evaluation points
  int farms = 60;                  // synth
  double noise = 0.0;              // synth: noise sd as a fraction of each target
  std::optional<double> price_max; // demand-curve grid, $/ML
  int points = 101;
  int threads = 0;                 // 0: hardware concurrency
  bool pretty = false;

  // Options as recorded in output metadata. --out and --threads are left
  // out so the same run writes the same bytes wherever it writes them.
  Json to_json() const;
};

// Exit codes: 0 success, 1 usage error, 2 typed library error, 3 anything else.
// Errors are printed to err as one JSON line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netputsim
