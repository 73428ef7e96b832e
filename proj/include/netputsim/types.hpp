#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netputsim/industry.hpp"

namespace netputsim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raw $/unit prices for each netput plus the numeraire price index P0.
// Normalised prices p_i = P_i / P0 are what the model consumes.
class PriceVector {
 public:
  PriceVector() = default;
  PriceVector(Vector raw, double p0);

  const Vector& raw() const { return raw_; }
  double p0() const { return p0_; }
  std::size_t size() const { return static_cast<std::size_t>(raw_.size()); }
  Vector normalized() const { return raw_ / p0_; }

  // Copy with raw price i replaced; the replacement must be positive.
  PriceVector with_price(std::size_t i, double raw_price) const;
  PriceVector with_p0(double p0) const;

 private:
  Vector raw_;
  double p0_ = 1.0;
};

// Signed netput quantities (outputs +, inputs -) in model order, plus the
// numeraire quantity x_m when it has been evaluated.
struct NetputVector {
  Vector values;
  std::optional<double> numeraire;
};

// Derivatives of the netput system with respect to the numeraire price and
// of the numeraire demand with respect to netput prices, evaluated at a
// fixed price point.
struct NumeraireEffects {
  Vector eval_raw_prices;
  double eval_p0 = 1.0;
  // d netput_i / d P0 = -(1/P0) * sum_j C_ij p_j (netput sign convention).
  Vector netput_wrt_p0;
  // d x_m / d p_i = sum_j C_ij p_j.
  Vector numeraire_wrt_price;
  // d x_m / d P0 = -(1/P0) * p'Cp.
  double numeraire_own = 0.0;
};

struct ParameterCovariance {
  std::vector<std::string> names;  // free-parameter labels, e.g. "C[milk,water]"
  Matrix matrix;
};

struct ParameterSet {
  IndustryId industry = IndustryId::kDairy;
  bool per_hectare = false;
  std::vector<std::string> netput_names;
  std::vector<std::string> fixed_names;
  std::vector<std::string> control_names;

  Vector a;       // netput intercepts (G)
  Vector b;       // fixed-input effects in the numeraire equation (k)
  Matrix C;       // symmetric price block (G x G)
  Matrix D;       // symmetric fixed-input block (k x k)
  Matrix alpha;   // price x fixed-input block (G x k)
  Matrix gamma;   // control shifters per netput equation (G x c)
  Vector gamma_m; // control shifters in the numeraire equation (c)
  double a_m = 0.0;

  std::optional<NumeraireEffects> numeraire_effects;
  std::optional<ParameterCovariance> covariance;
  std::string scale_note;

  std::size_t netput_count() const { return static_cast<std::size_t>(a.size()); }
  std::size_t fixed_count() const { return static_cast<std::size_t>(b.size()); }
  std::size_t control_count() const { return static_cast<std::size_t>(gamma.cols()); }

  // Zero-filled parameter set with dimensions taken from the industry.
  static ParameterSet zeros(const IndustrySpec& spec);

  // Throws kDimensionMismatch or kAsymmetric.
  void validate() const;
};

struct FarmRecord {
  std::string farm_id;
  int year = 0;
  IndustryId industry = IndustryId::kDairy;
  double weight = 1.0;
  std::string region;
  double area_operated = 0.0;
  std::vector<double> output_areas;  // horticulture only, one per output
  std::vector<double> quantities;    // natural units, >= 0, model netput order
  double numeraire_quantity = 0.0;
  std::vector<double> raw_prices;    // $/unit, model netput order
  double p0 = 1.0;
  std::vector<double> fixed;         // z_<name> columns in spec column order
  std::vector<double> controls;      // spec control order
  std::optional<double> wages_paid;

  PriceVector prices() const;
};

// Validated collection of farm-years; may hold several industries.
class FarmPanel {
 public:
  FarmPanel() = default;
  explicit FarmPanel(std::vector<FarmRecord> records);

  const std::vector<FarmRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::string& fingerprint() const { return fingerprint_; }

  std::vector<IndustryId> industries() const;
  const std::vector<std::size_t>& indices(IndustryId id) const;
  // Sub-panel holding one industry's records, optionally one year only.
  FarmPanel subset(IndustryId id, std::optional<int> year = std::nullopt) const;

 private:
  std::vector<FarmRecord> records_;
  std::string fingerprint_;
  std::map<IndustryId, std::vector<std::size_t>> partition_;
};

// Area divisor used for per-hectare scaling (1 for broadacre).
double area_divisor(const IndustrySpec& spec, const FarmRecord& record);
// Model z vector (fixed inputs including derived area terms).
Vector model_fixed_inputs(const IndustrySpec& spec, const FarmRecord& record);
Vector model_controls(const FarmRecord& record);

}  // namespace netputsim
