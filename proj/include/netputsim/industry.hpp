#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netputsim {

enum class IndustryId { kDairy, kBroadacreRice, kBroadacreNonRice, kHorticulture };

inline constexpr IndustryId kAllIndustries[] = {
    IndustryId::kDairy, IndustryId::kBroadacreRice,
    IndustryId::kBroadacreNonRice, IndustryId::kHorticulture};

std::string_view to_string(IndustryId id);
IndustryId parse_industry(std::string_view name);

enum class AreaRule { kTotalAreaOperated, kTotalHorticulturalArea, kNone };

std::string_view to_string(AreaRule rule);

enum class NetputRole { kOutput, kInput };

// Where a fixed input's value comes from when building the model z vector.
enum class FixedSource {
  kColumn,        // z_<name> column of the panel
  kAreaOperated,  // area_operated column (broadacre scale proxy)
  kAreaShare,     // share of total horticultural area planted to one output
};

struct Variable {
  std::string name;
  std::string unit;
};

struct FixedInput {
  std::string name;
  std::string unit;
  FixedSource source = FixedSource::kColumn;
  int output_index = -1;  // kAreaShare only
};

inline constexpr std::string_view kNumeraireName = "materials_services";
inline constexpr std::string_view kWaterName = "water";

// Declarative description of one industry's netput system. Netputs are
// ordered outputs first, then variable inputs; the numeraire is never a
// member of either list.
struct IndustrySpec {
  IndustryId id = IndustryId::kDairy;
  std::vector<Variable> outputs;
  std::vector<Variable> inputs;
  std::string numeraire_name{kNumeraireName};
  bool per_hectare = false;
  AreaRule area_rule = AreaRule::kNone;
  std::vector<FixedInput> fixed_inputs;
  std::vector<std::string> control_names;
  std::map<std::string, std::string> region_price_groups;

  std::size_t output_count() const { return outputs.size(); }
  std::size_t netput_count() const { return outputs.size() + inputs.size(); }
  std::size_t fixed_count() const { return fixed_inputs.size(); }
  std::size_t control_count() const { return control_names.size(); }

  std::vector<std::string> netput_names() const;
  std::vector<std::string> fixed_input_names() const;
  // Names of the z_<name> panel columns (FixedSource::kColumn entries).
  std::vector<std::string> fixed_column_names() const;
  const Variable& netput(std::size_t i) const;
  NetputRole role(std::size_t i) const;
  // +1 for outputs, -1 for inputs: maps netput values to quantities.
  double sign(std::size_t i) const { return i < outputs.size() ? 1.0 : -1.0; }
  std::optional<std::size_t> netput_index(std::string_view name) const;
  std::size_t water_index() const;
  std::optional<std::string> price_group(std::string_view region) const;

  // Throws Error(kValidation) when an invariant does not hold.
  void validate() const;
};

// The four industry systems of the southern-basin model.
const IndustrySpec& industry_spec(IndustryId id);

// Regions whose farms face one shared allocation price.
const std::map<std::string, std::string>& standard_region_price_groups();

}  // namespace netputsim
