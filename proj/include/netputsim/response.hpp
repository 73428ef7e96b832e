#pragma once

// Reported responses: marginal-effect and elasticity matrices over the
// netputs plus the numeraire, and water demand curves.

#include <optional>
#include <string>
#include <vector>

#include "netputsim/param_io.hpp"
#include "netputsim/types.hpp"

namespace netputsim {

enum class Reduction { kMean, kPerFarmWeighted };
std::string_view to_string(Reduction r);
Reduction parse_reduction(std::string_view name);

// Quantity sign convention: rows are quantities (inputs positive), columns
// are prices. The last row/column is the numeraire, whose price is P0; all
// other columns are normalised prices p_j = P_j / P0.
struct MarginalEffectMatrix {
  IndustryId industry = IndustryId::kDairy;
  std::vector<std::string> labels;
  Matrix value;
  std::optional<Matrix> se;
  std::optional<Matrix> p_value;
  PriceVector eval_prices;  // weighted mean raw prices and P0
  double eval_area = 1.0;   // weighted mean area divisor (1 for broadacre)
  Reduction reduction = Reduction::kPerFarmWeighted;
};

// Cells with zero mean quantity are NaN ("undefined").
struct ElasticityMatrix {
  IndustryId industry = IndustryId::kDairy;
  std::vector<std::string> labels;
  Matrix value;
  std::optional<Matrix> se;
  std::optional<Matrix> p_value;
  Vector eval_prices;    // normalised netput prices, then P0
  Vector eval_quantity;  // netput quantities, then x_m

  bool defined(Eigen::Index i, Eigen::Index j) const;
};

// Effects at one price point for a farm with the given area divisor.
MarginalEffectMatrix marginal_effects_at(const ParameterSet& params, const PriceVector& prices,
                                         double area = 1.0);
// kMean evaluates once at weighted mean prices and area; kPerFarmWeighted
// evaluates per farm-year and takes the survey-weighted mean.
MarginalEffectMatrix marginal_effects(const ParameterSet& params, const FarmPanel& panel,
                                      Reduction reduction = Reduction::kPerFarmWeighted);

// e_ij = m_ij p_j / q_i with p = (normalised prices, P0) and q = (netput
// quantities, x_m).
ElasticityMatrix elasticities(const MarginalEffectMatrix& m, const PriceVector& mean_prices,
                              const Vector& mean_quantity);

// Survey-weighted mean quantities (netputs then numeraire, farm level).
Vector weighted_mean_quantities(const FarmPanel& panel, IndustryId id);
PriceVector weighted_mean_prices(const FarmPanel& panel, IndustryId id);

struct WaterElasticityRow {
  IndustryId industry = IndustryId::kDairy;
  double elasticity = 0.0;
  std::optional<double> p_value;
};

// One row per industry in standard order; every industry must be present.
std::vector<WaterElasticityRow> own_price_water_table(const std::vector<ElasticityMatrix>& ms);

// Everything held fixed along a demand curve.
struct DemandProfile {
  std::string label;
  double area_operated = 0.0;
  double area = 1.0;     // area divisor, per-hectare industries only
  PriceVector prices;    // water entry is replaced along the grid
  Vector z;              // model fixed inputs
  Vector w;              // controls
};

struct DemandPoint {
  double price = 0.0;     // $/ML
  double quantity = 0.0;  // ML at farm level
};

struct DemandCurve {
  std::string netput{"water"};
  std::vector<DemandPoint> points;  // raw model output, may go negative
  std::optional<double> choke_price;
  DemandProfile profile;

  // Points with negative quantities clipped to zero.
  std::vector<DemandPoint> exported() const;
};

DemandCurve water_demand_curve(const ParameterSet& params, const DemandProfile& profile,
                               const std::vector<double>& price_grid);

// Weighted quartiles of area operated over farm-years: a record falls in
// quartile floor(4 * m / W), m being the cumulative weight up to its
// midpoint in ascending-area order. Profiles are weighted means.
std::vector<DemandProfile> quartile_profiles(const FarmPanel& panel);

std::vector<double> linear_grid(double lo, double hi, int points);

// effect, se, p triplets per column.
std::string matrix_csv(const std::vector<std::string>& labels, const Matrix& value,
                       const std::optional<Matrix>& se, const std::optional<Matrix>& p,
                       bool pretty = false);
std::string marginal_effects_csv(const MarginalEffectMatrix& m, bool pretty = false);
std::string elasticities_csv(const ElasticityMatrix& e, bool pretty = false);
Json to_json(const MarginalEffectMatrix& m);
Json to_json(const ElasticityMatrix& e);
std::string water_table_csv(const std::vector<WaterElasticityRow>& rows, bool pretty = false);
// price,quantity,quartile rows; clipped.
std::string demand_curves_csv(const std::vector<DemandCurve>& curves, bool pretty = false);

}  // namespace netputsim
