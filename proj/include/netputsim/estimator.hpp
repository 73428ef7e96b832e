#pragma once

// Restricted SUR (iterated feasible GLS) for the netput system. Every
// equation shares the regressors [1, p, z, w], so 3SLS with the regressors
// as their own instruments is the same estimator. Symmetry of C is imposed
// by estimating only its upper triangle; homogeneity by normalising prices.

#include <optional>
#include <string>
#include <vector>

#include "netputsim/param_io.hpp"
#include "netputsim/types.hpp"

namespace netputsim {

enum class ParamBlock { kIntercept, kPrice, kFixed, kControl };

// One free parameter and the coefficient slot(s) it fills. Off-diagonal
// price parameters fill (equation, column) and (partner, partner_column).
struct FreeParameter {
  std::string name;
  ParamBlock block = ParamBlock::kIntercept;
  int equation = 0;
  int column = 0;  // regressor column
  int partner = -1;
  int partner_column = -1;
};

struct SystemDesign {
  IndustryId industry = IndustryId::kDairy;
  std::vector<std::string> equation_names;   // netputs
  std::vector<std::string> regressor_names;  // const, p_*, z_*, w_*
  std::vector<std::string> fixed_names;
  std::vector<std::string> control_names;
  Matrix X;           // T x K shared regressors
  Matrix Y;           // T x G signed netputs (per hectare where applicable)
  Vector numeraire;   // T, x_m (per hectare where applicable)
  Vector area;        // T area divisors (1 for broadacre)
  std::optional<Vector> weights;  // survey weights scaled to mean 1
  std::vector<std::string> farm_ids;
  std::vector<int> years;
  Vector mean_raw_prices;  // survey-weighted means of the raw prices
  double mean_p0 = 1.0;
  std::vector<FreeParameter> free_parameters;

  Eigen::Index observations() const { return X.rows(); }
  Eigen::Index equations() const { return Y.cols(); }
  Eigen::Index netput_count() const { return Y.cols(); }
  Eigen::Index fixed_count() const { return static_cast<Eigen::Index>(fixed_names.size()); }
  Eigen::Index control_count() const { return static_cast<Eigen::Index>(control_names.size()); }
  Eigen::Index price_column(Eigen::Index j) const { return 1 + j; }
  Eigen::Index fixed_column(Eigen::Index f) const { return 1 + netput_count() + f; }
  Eigen::Index control_column(Eigen::Index c) const {
    return 1 + netput_count() + fixed_count() + c;
  }
};

struct DesignOptions {
  bool weighted = false;  // carry survey weights into estimation
};

// Single-industry panel -> design. Prices are normalised by P0 and
// quantities divided by the industry's area divisor.
SystemDesign build_design(const FarmPanel& panel, const IndustrySpec& spec,
                          const DesignOptions& options = {});

// The free parameter list for a G-equation system with the given names.
std::vector<FreeParameter> free_parameter_map(const std::vector<std::string>& netputs,
                                              const std::vector<std::string>& fixed,
                                              const std::vector<std::string>& controls);

struct ParameterEstimate {
  std::string name;
  double value = 0.0;
  double se = 0.0;
  double p_value = 1.0;
};

struct IterationRecord {
  int iteration = 0;
  double relative_change = 0.0;
};

struct EstimateOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;
  double rank_tolerance = 1e-10;
  bool numeraire_equation = true;  // estimate a_m, b, D, gamma_m by OLS
};

struct EstimateReport {
  ParameterSet params;
  std::vector<ParameterEstimate> system;     // free netput-system parameters
  std::vector<ParameterEstimate> numeraire;  // a_m, b, D upper triangle, gamma_m
  Matrix residual_covariance;                // G x G
  std::vector<IterationRecord> iterations;
  bool converged = false;
  bool exact_fit = false;
  Eigen::Index observations = 0;
  bool weighted = false;
};

EstimateReport estimate(const SystemDesign& design, const EstimateOptions& options = {});

// Fills params.numeraire_effects at the given prices.
ParameterSet recover_numeraire_effects(ParameterSet params, const PriceVector& mean_prices);

// Per-parameter se and p-values from the covariance stored on params.
std::vector<ParameterEstimate> standard_errors(const SystemDesign& design,
                                               const ParameterSet& params);

// Two-sided normal p-value for an estimate / se ratio.
double two_sided_p(double value, double se);

Json report_to_json(const EstimateReport& report);
// name,value,se,p_value rows (system then numeraire parameters).
std::string parameters_csv(const EstimateReport& report, bool pretty = false);

}  // namespace netputsim
