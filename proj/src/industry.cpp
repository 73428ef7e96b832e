#include "netputsim/industry.hpp"

#include <set>

#include "netputsim/error.hpp"

namespace netputsim {

std::string_view to_string(IndustryId id) {
  switch (id) {
    case IndustryId::kDairy: return "dairy";
    case IndustryId::kBroadacreRice: return "broadacre_rice";
    case IndustryId::kBroadacreNonRice: return "broadacre_nonrice";
    case IndustryId::kHorticulture: return "horticulture";
  }
  return "unknown";
}

IndustryId parse_industry(std::string_view name) {
  for (IndustryId id : kAllIndustries) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown industry '" + std::string(name) + "'");
}

std::string_view to_string(AreaRule rule) {
  switch (rule) {
    case AreaRule::kTotalAreaOperated: return "total_area_operated";
    case AreaRule::kTotalHorticulturalArea: return "total_horticultural_area";
    case AreaRule::kNone: return "none";
  }
  return "unknown";
}

std::vector<std::string> IndustrySpec::netput_names() const {
  std::vector<std::string> names;
  names.reserve(netput_count());
  for (const auto& v : outputs) names.push_back(v.name);
  for (const auto& v : inputs) names.push_back(v.name);
  return names;
}

std::vector<std::string> IndustrySpec::fixed_input_names() const {
  std::vector<std::string> names;
  for (const auto& f : fixed_inputs) names.push_back(f.name);
  return names;
}

std::vector<std::string> IndustrySpec::fixed_column_names() const {
  std::vector<std::string> names;
  for (const auto& f : fixed_inputs) {
    if (f.source == FixedSource::kColumn) names.push_back(f.name);
  }
  return names;
}

const Variable& IndustrySpec::netput(std::size_t i) const {
  return i < outputs.size() ? outputs[i] : inputs.at(i - outputs.size());
}

NetputRole IndustrySpec::role(std::size_t i) const {
  return i < outputs.size() ? NetputRole::kOutput : NetputRole::kInput;
}

std::optional<std::size_t> IndustrySpec::netput_index(std::string_view name) const {
  for (std::size_t i = 0; i < netput_count(); ++i) {
    if (netput(i).name == name) return i;
  }
  return std::nullopt;
}

std::size_t IndustrySpec::water_index() const {
  auto idx = netput_index(kWaterName);
  if (!idx) {
    throw Error(ErrorCode::kUnknownNetput,
                std::string(to_string(id)) + " has no water netput");
  }
  return *idx;
}

std::optional<std::string> IndustrySpec::price_group(std::string_view region) const {
  auto it = region_price_groups.find(std::string(region));
  if (it == region_price_groups.end()) return std::nullopt;
  return it->second;
}

void IndustrySpec::validate() const {
  std::vector<std::string> problems;
  if (outputs.empty()) problems.push_back("no outputs");
  if (inputs.empty()) problems.push_back("no variable inputs");
  if (fixed_inputs.empty()) problems.push_back("no fixed inputs");
  std::set<std::string> seen;
  auto check_unique = [&](const std::string& name) {
    if (!seen.insert(name).second) problems.push_back("duplicate name " + name);
  };
  for (const auto& v : outputs) check_unique(v.name);
  for (const auto& v : inputs) check_unique(v.name);
  if (seen.count(numeraire_name)) {
    problems.push_back("numeraire listed as a netput");
  }
  std::set<std::string> fixed_seen;
  for (const auto& f : fixed_inputs) {
    if (!fixed_seen.insert(f.name).second) {
      problems.push_back("duplicate fixed input " + f.name);
    }
    if (f.source == FixedSource::kAreaShare &&
        (f.output_index < 0 || static_cast<std::size_t>(f.output_index) >= outputs.size())) {
      problems.push_back("area share " + f.name + " names no output");
    }
  }
  const bool broadacre =
      id == IndustryId::kBroadacreRice || id == IndustryId::kBroadacreNonRice;
  if (per_hectare == broadacre) {
    problems.push_back("per_hectare must be false exactly for broadacre industries");
  }
  if (per_hectare && area_rule == AreaRule::kNone) {
    problems.push_back("per-hectare industry needs an area rule");
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kValidation,
                "invalid industry spec for " + std::string(to_string(id)), problems);
  }
}

const std::map<std::string, std::string>& standard_region_price_groups() {
  static const std::map<std::string, std::string> groups = {
      {"adelaide_mt_lofty", "murray"},
      {"nsw_murray", "murray"},
      {"vic_murray", "murray"},
      {"goulburn_broken", "goulburn_loddon"},
      {"loddon_campaspe", "goulburn_loddon"},
      {"murrumbidgee", "murrumbidgee"},
      {"lower_darling", "lower_darling"},
  };
  return groups;
}

namespace {

std::vector<std::string> standard_controls() {
  return {"rainfall_mm", "education", "age"};
}

IndustrySpec make_dairy() {
  IndustrySpec s;
  s.id = IndustryId::kDairy;
  s.outputs = {{"milk", "L"}, {"dairy_cattle", "no."}};
  s.inputs = {{"labour", "weeks"}, {"fodder", "index"}, {"water", "ML"}};
  s.per_hectare = true;
  s.area_rule = AreaRule::kTotalAreaOperated;
  s.fixed_inputs = {{"family_labour", "no."},
                    {"dairy_cattle_open", "no."},
                    {"capital", "$"},
                    {"entitlement_value", "$"}};
  s.control_names = standard_controls();
  s.region_price_groups = standard_region_price_groups();
  return s;
}

IndustrySpec make_broadacre(bool rice) {
  IndustrySpec s;
  s.id = rice ? IndustryId::kBroadacreRice : IndustryId::kBroadacreNonRice;
  if (rice) s.outputs.push_back({"rice", "t"});
  s.outputs.push_back({"other_broadacre", "t"});
  s.outputs.push_back({"livestock", "no."});
  s.inputs = {{"labour", "weeks"}, {"water", "ML"}};
  s.per_hectare = false;
  s.area_rule = AreaRule::kNone;
  s.fixed_inputs = {{"area_operated", "ha", FixedSource::kAreaOperated},
                    {"family_labour", "no."},
                    {"beef_open", "no."},
                    {"sheep_open", "no."},
                    {"capital", "$"},
                    {"entitlement_value", "$"}};
  s.control_names = standard_controls();
  s.region_price_groups = standard_region_price_groups();
  return s;
}

IndustrySpec make_horticulture() {
  IndustrySpec s;
  s.id = IndustryId::kHorticulture;
  s.outputs = {{"pome", "t"},         {"citrus", "t"},     {"stone_fruit", "t"},
               {"table_grapes", "t"}, {"wine_grapes", "t"}, {"vegetables", "t"},
               {"other_horticulture", "t"}};
  s.inputs = {{"labour", "weeks"}, {"water", "ML"}};
  s.per_hectare = true;
  s.area_rule = AreaRule::kTotalHorticulturalArea;
  s.fixed_inputs = {{"family_labour", "no."},
                    {"beef_open", "no."},
                    {"sheep_open", "no."},
                    {"capital", "$"},
                    {"other_capital", "$"},
                    {"entitlement_value", "$"}};
  // Planted-area shares; the last output is the omitted reference share
  // because all shares sum to one.
  for (std::size_t i = 0; i + 1 < s.outputs.size(); ++i) {
    s.fixed_inputs.push_back({"share_" + s.outputs[i].name, "ha/ha",
                              FixedSource::kAreaShare, static_cast<int>(i)});
  }
  s.control_names = standard_controls();
  s.region_price_groups = standard_region_price_groups();
  return s;
}

}  // namespace

const IndustrySpec& industry_spec(IndustryId id) {
  static const IndustrySpec dairy = make_dairy();
  static const IndustrySpec rice = make_broadacre(true);
  static const IndustrySpec nonrice = make_broadacre(false);
  static const IndustrySpec horticulture = make_horticulture();
  switch (id) {
    case IndustryId::kDairy: return dairy;
    case IndustryId::kBroadacreRice: return rice;
    case IndustryId::kBroadacreNonRice: return nonrice;
    case IndustryId::kHorticulture: return horticulture;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown industry id");
}

}  // namespace netputsim
