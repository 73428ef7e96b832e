#pragma once

// Post-estimation diagnostics: per-equation R^2 on the estimation and level
// scales, monotonicity shares, convexity of the price block, and
// actual-vs-predicted exports.

#include <optional>
#include <string>
#include <vector>

#include "netputsim/param_io.hpp"
#include "netputsim/types.hpp"

namespace netputsim {

// 1 - SS_res / SS_tot about the mean of actual. Throws kDimensionMismatch
// for unequal or too-short inputs and kInvalidArgument for constant actual.
double r_squared(const Vector& actual, const Vector& predicted);

// Share of predicted netputs with the expected sign: outputs > 0, inputs < 0
// (input quantities > 0). Zero counts as a violation. Throws kEmptyInput.
double monotonicity_share(const Vector& predicted_netputs, NetputRole role);
// One share per column of a T x G matrix of predicted netputs.
std::vector<double> monotonicity_shares(const Matrix& predicted_netputs, const IndustrySpec& spec);

struct ConvexityVerdict {
  bool psd = false;                 // eigenvalue criterion
  bool cholesky_psd = false;        // pivoted Cholesky criterion
  bool criteria_agree = false;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  Vector eigenvalues;               // ascending
  Vector failing_direction;         // unit eigenvector of min_eigenvalue; empty when psd
  Eigen::Index cholesky_rank = 0;   // pivots taken before stopping
  std::string matrix;               // what was tested
};

// PSD iff min eigenvalue >= -tolerance; tolerance defaults to 1e-8 times the
// spectral norm. Throws kAsymmetric beyond 1e-10 (relative to max |C_ij|
// when that exceeds one).
ConvexityVerdict convexity_check(const Matrix& c, std::optional<double> tolerance = std::nullopt);

// Pivoted Cholesky on its own: true when the factorisation completes with
// every remaining pivot within tolerance of zero and no negative pivot.
bool pivoted_cholesky_psd(const Matrix& c, double tolerance, Eigen::Index* rank = nullptr);

struct FitRow {
  std::string farm_id;
  std::string equation;
  double actual = 0.0;
  double predicted = 0.0;
};

// Aligned vectors -> rows for one equation; throws kDimensionMismatch.
std::vector<FitRow> fit_rows(const std::vector<std::string>& farm_ids, const std::string& equation,
                             const Vector& actual, const Vector& predicted);
// farm_id,equation,actual,predicted
std::string fit_export_csv(const std::vector<FitRow>& rows, bool pretty = false);
std::vector<FitRow> parse_fit_export(std::string_view text);

struct EquationFit {
  std::string equation;
  std::optional<double> r2_per_hectare;  // per-hectare industries only
  double r2_level = 0.0;                 // NaN when actual is constant
  double monotonicity = 0.0;
  bool own_price_expected_sign = false;  // C_ii >= 0 in netput terms
  Eigen::Index observations = 0;
};

struct IndustryValidation {
  IndustryId industry = IndustryId::kDairy;
  std::vector<EquationFit> equations;
  ConvexityVerdict convexity;
  std::vector<FitRow> fit;  // quantity convention, level scale
  std::string fit_file;     // set by the writer when exported
};

struct ValidationReport {
  std::vector<IndustryValidation> industries;
};

// Predictions use the panel's own prices, fixed inputs and controls. Quantities
// are compared in the quantity convention (inputs positive).
IndustryValidation validate_industry(const ParameterSet& params, const FarmPanel& panel);

// industry,equation,per_hectare_r2,level_r2; the per-hectare cell is blank for
// level industries.
std::string r_squared_csv(const ValidationReport& report, bool pretty = false);
// industry,equation,monotonicity
std::string monotonicity_csv(const ValidationReport& report, bool pretty = false);
Json validation_to_json(const ValidationReport& report);

}  // namespace netputsim
