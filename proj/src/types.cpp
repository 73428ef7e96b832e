#include "netputsim/types.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "netputsim/digest.hpp"
#include "netputsim/error.hpp"

namespace netputsim {

PriceVector::PriceVector(Vector raw, double p0) : raw_(std::move(raw)), p0_(p0) {
  if (!(p0_ > 0.0) || !std::isfinite(p0_)) {
    throw Error(ErrorCode::kInvalidPrice, "numeraire price must be positive");
  }
  for (Eigen::Index i = 0; i < raw_.size(); ++i) {
    if (!(raw_[i] > 0.0) || !std::isfinite(raw_[i])) {
      throw Error(ErrorCode::kInvalidPrice,
                  "raw price " + std::to_string(i) + " must be positive");
    }
  }
}

PriceVector PriceVector::with_price(std::size_t i, double raw_price) const {
  Vector raw = raw_;
  raw[static_cast<Eigen::Index>(i)] = raw_price;
  return PriceVector(std::move(raw), p0_);
}

PriceVector PriceVector::with_p0(double p0) const { return PriceVector(raw_, p0); }

ParameterSet ParameterSet::zeros(const IndustrySpec& spec) {
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  const auto k = static_cast<Eigen::Index>(spec.fixed_count());
  const auto c = static_cast<Eigen::Index>(spec.control_count());
  ParameterSet p;
  p.industry = spec.id;
  p.per_hectare = spec.per_hectare;
  p.netput_names = spec.netput_names();
  p.fixed_names = spec.fixed_input_names();
  p.control_names = spec.control_names;
  p.a = Vector::Zero(g);
  p.b = Vector::Zero(k);
  p.C = Matrix::Zero(g, g);
  p.D = Matrix::Zero(k, k);
  p.alpha = Matrix::Zero(g, k);
  p.gamma = Matrix::Zero(g, c);
  p.gamma_m = Vector::Zero(c);
  p.scale_note = spec.per_hectare ? "per_hectare" : "level";
  return p;
}

void ParameterSet::validate() const {
  const Eigen::Index g = a.size();
  const Eigen::Index k = b.size();
  std::vector<std::string> problems;
  if (C.rows() != g || C.cols() != g) problems.push_back("C is not G x G");
  if (D.rows() != k || D.cols() != k) problems.push_back("D is not k x k");
  if (alpha.rows() != g || alpha.cols() != k) problems.push_back("alpha is not G x k");
  if (gamma.rows() != g) problems.push_back("gamma row count differs from G");
  if (gamma_m.size() != gamma.cols()) problems.push_back("gamma_m length differs from control count");
  if (!netput_names.empty() && static_cast<Eigen::Index>(netput_names.size()) != g) {
    problems.push_back("netput_names length differs from G");
  }
  if (!fixed_names.empty() && static_cast<Eigen::Index>(fixed_names.size()) != k) {
    problems.push_back("fixed_names length differs from k");
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent parameter set", problems);
  }
  if (C != C.transpose()) throw Error(ErrorCode::kAsymmetric, "C must be exactly symmetric");
  if (D != D.transpose()) throw Error(ErrorCode::kAsymmetric, "D must be exactly symmetric");
}

PriceVector FarmRecord::prices() const {
  return PriceVector(Eigen::Map<const Vector>(raw_prices.data(),
                                              static_cast<Eigen::Index>(raw_prices.size())),
                     p0);
}

FarmPanel::FarmPanel(std::vector<FarmRecord> records) : records_(std::move(records)) {
  std::set<std::pair<std::string, int>> keys;
  std::vector<std::string> problems;
  Fnv1a fp;
  for (std::size_t r = 0; r < records_.size(); ++r) {
    const FarmRecord& rec = records_[r];
    const IndustrySpec& spec = industry_spec(rec.industry);
    if (!keys.emplace(rec.farm_id, rec.year).second) {
      problems.push_back("record " + std::to_string(r) + ": duplicate (farm_id, year) = (" +
                         rec.farm_id + ", " + std::to_string(rec.year) + ")");
    }
    if (rec.quantities.size() != spec.netput_count() ||
        rec.raw_prices.size() != spec.netput_count() ||
        rec.fixed.size() != spec.fixed_column_names().size() ||
        rec.controls.size() != spec.control_count()) {
      problems.push_back("record " + std::to_string(r) + ": field count does not match " +
                         std::string(to_string(rec.industry)));
    }
    if (spec.area_rule == AreaRule::kTotalHorticulturalArea &&
        rec.output_areas.size() != spec.output_count()) {
      problems.push_back("record " + std::to_string(r) + ": missing per-output areas");
    }
    auto [it, inserted] = partition_.try_emplace(rec.industry);
    it->second.push_back(r);
    if (inserted) fp.update(to_string(rec.industry));
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kValidation, "invalid farm panel", problems);
  }
  for (const auto& [id, idx] : partition_) {
    const IndustrySpec& spec = industry_spec(id);
    for (const auto& n : spec.netput_names()) fp.update(n);
    for (const auto& n : spec.fixed_input_names()) fp.update(n);
  }
  fingerprint_ = fp.hex();
}

std::vector<IndustryId> FarmPanel::industries() const {
  std::vector<IndustryId> ids;
  for (const auto& [id, idx] : partition_) ids.push_back(id);
  return ids;
}

const std::vector<std::size_t>& FarmPanel::indices(IndustryId id) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = partition_.find(id);
  return it == partition_.end() ? kEmpty : it->second;
}

FarmPanel FarmPanel::subset(IndustryId id, std::optional<int> year) const {
  std::vector<FarmRecord> out;
  for (std::size_t i : indices(id)) {
    if (!year || records_[i].year == *year) out.push_back(records_[i]);
  }
  return FarmPanel(std::move(out));
}

double area_divisor(const IndustrySpec& spec, const FarmRecord& record) {
  switch (spec.area_rule) {
    case AreaRule::kTotalAreaOperated:
      return record.area_operated;
    case AreaRule::kTotalHorticulturalArea: {
      double total = 0.0;
      for (double a : record.output_areas) total += a;
      return total;
    }
    case AreaRule::kNone:
      return 1.0;
  }
  return 1.0;
}

Vector model_fixed_inputs(const IndustrySpec& spec, const FarmRecord& record) {
  Vector z(static_cast<Eigen::Index>(spec.fixed_count()));
  std::size_t column = 0;
  double hort_total = 0.0;
  for (double a : record.output_areas) hort_total += a;
  for (std::size_t f = 0; f < spec.fixed_count(); ++f) {
    const FixedInput& fi = spec.fixed_inputs[f];
    double value = 0.0;
    switch (fi.source) {
      case FixedSource::kColumn:
        value = record.fixed.at(column++);
        break;
      case FixedSource::kAreaOperated:
        value = record.area_operated;
        break;
      case FixedSource::kAreaShare:
        value = hort_total > 0.0
                    ? record.output_areas.at(static_cast<std::size_t>(fi.output_index)) / hort_total
                    : 0.0;
        break;
    }
    z[static_cast<Eigen::Index>(f)] = value;
  }
  return z;
}

Vector model_controls(const FarmRecord& record) {
  return Eigen::Map<const Vector>(record.controls.data(),
                                  static_cast<Eigen::Index>(record.controls.size()));
}

}  // namespace netputsim
