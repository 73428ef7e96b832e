#include "netputsim/panel_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "netputsim/csv.hpp"
#include "netputsim/error.hpp"
#include "netputsim/kernels.hpp"

namespace netputsim {

namespace {

constexpr std::string_view kP0Column = "p0_materials";
constexpr std::string_view kWagesColumn = "wages_paid";
constexpr std::string_view kTotalCapitalColumn = "total_capital";
constexpr std::string_view kLandValueColumn = "land_value";

std::string q_col(std::string_view n) { return "q_" + std::string(n); }
std::string p_col(std::string_view n) { return "praw_" + std::string(n); }
std::string z_col(std::string_view n) { return "z_" + std::string(n); }
std::string area_col(std::string_view n) { return "area_" + std::string(n); }

}  // namespace

PanelSchema PanelSchema::standard() {
  PanelSchema s;
  s.region_price_groups = standard_region_price_groups();
  s.units = {{"weight", "farms"},
             {"area_operated", "ha"},
             {std::string(kP0Column), "index"},
             {q_col(kNumeraireName), "index"},
             {"rainfall_mm", "mm"},
             {"education", "0/1"},
             {"age", "years"},
             {std::string(kWagesColumn), "$"},
             {std::string(kTotalCapitalColumn), "$"},
             {std::string(kLandValueColumn), "$"}};
  for (IndustryId id : kAllIndustries) {
    const IndustrySpec& spec = industry_spec(id);
    for (std::size_t i = 0; i < spec.netput_count(); ++i) {
      const Variable& v = spec.netput(i);
      s.units[q_col(v.name)] = v.unit;
      s.units[p_col(v.name)] = v.unit == "index" ? "index" : "$/" + v.unit;
    }
    for (const FixedInput& f : spec.fixed_inputs) {
      if (f.source == FixedSource::kColumn) s.units[z_col(f.name)] = f.unit;
    }
    if (spec.area_rule == AreaRule::kTotalHorticulturalArea) {
      for (const auto& o : spec.outputs) s.units[area_col(o.name)] = "ha";
    }
  }
  return s;
}

const std::vector<std::string>& PanelSchema::identifier_columns() {
  static const std::vector<std::string> cols = {"farm_id", "year",   "industry",
                                                "weight",  "region", "area_operated"};
  return cols;
}

const std::vector<std::string>& PanelSchema::optional_columns() {
  static const std::vector<std::string> cols = {std::string(kWagesColumn),
                                                std::string(kTotalCapitalColumn),
                                                std::string(kLandValueColumn)};
  return cols;
}

std::vector<std::string> PanelSchema::required_columns(IndustryId id) const {
  const IndustrySpec& spec = industry_spec(id);
  std::vector<std::string> cols = identifier_columns();
  if (spec.area_rule == AreaRule::kTotalHorticulturalArea) {
    for (const auto& o : spec.outputs) cols.push_back(area_col(o.name));
  }
  for (const auto& n : spec.netput_names()) cols.push_back(q_col(n));
  cols.push_back(q_col(spec.numeraire_name));
  for (const auto& n : spec.netput_names()) cols.push_back(p_col(n));
  cols.emplace_back(kP0Column);
  for (const auto& n : spec.fixed_column_names()) cols.push_back(z_col(n));
  for (const auto& n : spec.control_names) cols.push_back(n);
  return cols;
}

std::vector<std::string> PanelSchema::columns_for(const std::vector<IndustryId>& ids) const {
  std::vector<std::string> cols;
  std::set<std::string> seen;
  for (IndustryId id : ids) {
    for (auto& c : required_columns(id)) {
      if (seen.insert(c).second) cols.push_back(std::move(c));
    }
  }
  if (cols.empty()) cols = identifier_columns();
  return cols;
}

std::optional<double> PanelSchema::water_price(std::string_view region, int year) const {
  auto g = region_price_groups.find(std::string(region));
  if (g == region_price_groups.end()) return std::nullopt;
  auto it = water_prices.find({g->second, year});
  if (it == water_prices.end()) return std::nullopt;
  return it->second;
}

CapitalImputation impute_capital(double recorded_capital, double total_capital,
                                 double land_value, double entitlement_value) {
  if (recorded_capital != 0.0) return {recorded_capital, false, false};
  std::vector<std::string> negative;
  if (total_capital < 0) negative.push_back("total_capital");
  if (land_value < 0) negative.push_back("land_value");
  if (entitlement_value < 0) negative.push_back("entitlement_value");
  if (!negative.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "capital components must be nonnegative", negative);
  }
  const double residual = total_capital - land_value - entitlement_value;
  if (residual < 0) return {0.0, true, true};
  return {residual, true, false};
}

double materials_price_index(const std::map<std::string, double>& component_indices,
                             const std::map<std::string, double>& expenditure_shares) {
  if (expenditure_shares.empty()) throw Error(ErrorCode::kEmptyInput, "no expenditure shares");
  double share_total = 0.0;
  double index = 0.0;
  std::vector<std::string> problems;
  for (const auto& [name, share] : expenditure_shares) {
    if (!(share >= 0.0)) problems.push_back("negative share for " + name);
    auto it = component_indices.find(name);
    if (it == component_indices.end()) {
      problems.push_back("no price index for " + name);
      continue;
    }
    share_total += share;
    index += share * it->second;
  }
  for (const auto& [name, value] : component_indices) {
    if (!expenditure_shares.count(name)) problems.push_back("no share for " + name);
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent price index components", problems);
  }
  if (std::abs(share_total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("expenditure shares sum to {:.12g}, not 1", share_total));
  }
  return index;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double labour_price(const FarmPanel& panel) {
  std::vector<double> ratios;
  for (const FarmRecord& r : panel.records()) {
    const auto idx = industry_spec(r.industry).netput_index("labour");
    if (!idx || !r.wages_paid) continue;
    const double weeks = r.quantities[*idx];
    if (weeks > 0.0) ratios.push_back(*r.wages_paid / weeks);
  }
  if (ratios.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no record with positive hired labour and wages");
  }
  return median(std::move(ratios));
}

namespace {

void check_weights(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "values and weights differ in length");
  }
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "weighted statistic of an empty set");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be positive");
    }
  }
}

}  // namespace

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  check_weights(values, weights);
  // Equal weights reduce to the plain mean exactly, not just to rounding.
  if (std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights[0]; })) {
    return kernels::sum(values) / static_cast<double>(values.size());
  }
  return kernels::dot(values, weights) / kernels::sum(weights);
}

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  check_weights(values, weights);
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double half = 0.5 * kernels::sum(weights);
  double cum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cum += weights[order[k]];
    if (cum > half) return values[order[k]];
    if (cum == half) {
      return k + 1 < order.size() ? 0.5 * (values[order[k]] + values[order[k + 1]])
                                  : values[order[k]];
    }
  }
  return values[order.back()];
}

double weighted_sd(std::span<const double> values, std::span<const double> weights) {
  const double mean = weighted_mean(values, weights);
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    ss += weights[i] * d * d;
  }
  return std::sqrt(ss / kernels::sum(weights));
}

Statistic parse_statistic(std::string_view name) {
  if (name == "mean") return Statistic::kMean;
  if (name == "median") return Statistic::kMedian;
  if (name == "sd") return Statistic::kSd;
  throw Error(ErrorCode::kInvalidArgument, "unknown statistic '" + std::string(name) + "'");
}

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::kMean: return "mean";
    case Statistic::kMedian: return "median";
    case Statistic::kSd: return "sd";
  }
  return "unknown";
}

std::vector<SummaryRow> weighted_summary(const FarmPanel& panel, Statistic statistic,
                                         const PanelSchema& schema) {
  if (panel.empty()) throw Error(ErrorCode::kEmptyInput, "weighted summary of an empty panel");
  std::vector<SummaryRow> out;
  for (IndustryId id : panel.industries()) {
    const IndustrySpec& spec = industry_spec(id);
    const auto& idx = panel.indices(id);
    std::vector<double> w;
    for (std::size_t i : idx) w.push_back(panel.records()[i].weight);

    auto emit = [&](const std::string& column, auto&& getter) {
      std::vector<double> v;
      v.reserve(idx.size());
      for (std::size_t i : idx) v.push_back(getter(panel.records()[i]));
      double value = 0.0;
      switch (statistic) {
        case Statistic::kMean: value = weighted_mean(v, w); break;
        case Statistic::kMedian: value = weighted_median(v, w); break;
        case Statistic::kSd: value = weighted_sd(v, w); break;
      }
      auto u = schema.units.find(column);
      out.push_back({id, column, u == schema.units.end() ? "" : u->second, value, idx.size()});
    };

    for (std::size_t g = 0; g < spec.netput_count(); ++g) {
      emit(q_col(spec.netput(g).name), [g](const FarmRecord& r) { return r.quantities[g]; });
    }
    emit(q_col(spec.numeraire_name), [](const FarmRecord& r) { return r.numeraire_quantity; });
    for (std::size_t g = 0; g < spec.netput_count(); ++g) {
      emit(p_col(spec.netput(g).name), [g](const FarmRecord& r) { return r.raw_prices[g]; });
    }
    emit(std::string(kP0Column), [](const FarmRecord& r) { return r.p0; });
    emit("area_operated", [](const FarmRecord& r) { return r.area_operated; });
    const auto zcols = spec.fixed_column_names();
    for (std::size_t f = 0; f < zcols.size(); ++f) {
      emit(z_col(zcols[f]), [f](const FarmRecord& r) { return r.fixed[f]; });
    }
    for (std::size_t c = 0; c < spec.control_count(); ++c) {
      emit(spec.control_names[c], [c](const FarmRecord& r) { return r.controls[c]; });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV load / save

namespace {

struct RowProblems {
  std::vector<std::string> lines;
  std::set<ErrorCode> codes;
  void add(ErrorCode code, std::size_t line, const std::string& msg) {
    codes.insert(code);
    lines.push_back(fmt::format("line {}: {}", line, msg));
  }
};

}  // namespace

FarmPanel parse_panel(std::string_view text, const PanelSchema& schema, PanelLoadReport* report) {
  const csv::Table table = csv::parse(text);
  PanelLoadReport local;
  local.comments = table.comments;
  for (const auto& c : table.comments) {
    constexpr std::string_view key = "schema=";
    if (c.rfind(key, 0) == 0 && c.substr(key.size()) != schema.version) {
      throw Error(ErrorCode::kParse, "unsupported panel schema '" + c.substr(key.size()) +
                                         "', expected " + schema.version);
    }
  }

  for (const auto& c : PanelSchema::identifier_columns()) {
    if (!table.column(c)) {
      throw Error(ErrorCode::kMissingColumn, "panel is missing column " + c, {c});
    }
  }
  const std::size_t c_industry = *table.column("industry");

  // Industries present decide which columns are required.
  std::vector<IndustryId> present;
  RowProblems problems;
  std::vector<std::optional<IndustryId>> row_industry(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    try {
      IndustryId id = parse_industry(table.rows[r][c_industry]);
      row_industry[r] = id;
      if (std::find(present.begin(), present.end(), id) == present.end()) present.push_back(id);
    } catch (const Error& e) {
      problems.add(ErrorCode::kValidation, table.line_numbers[r], e.what());
    }
  }
  std::sort(present.begin(), present.end());
  const bool water_table = !schema.water_prices.empty();
  std::vector<std::string> missing;
  for (IndustryId id : present) {
    for (const auto& c : schema.required_columns(id)) {
      if (water_table && c == p_col(kWaterName)) continue;
      if (!table.column(c) && std::find(missing.begin(), missing.end(), c) == missing.end()) {
        missing.push_back(c);
      }
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (const auto& m : missing) joined += (joined.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kMissingColumn, "panel is missing column(s) " + joined, missing);
  }

  const auto col = [&](std::string_view name) { return table.column(name); };
  const auto c_total = col(kTotalCapitalColumn);
  const auto c_land = col(kLandValueColumn);
  const auto c_wages = col(kWagesColumn);

  std::vector<FarmRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (!row_industry[r]) continue;
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    const IndustrySpec& spec = industry_spec(*row_industry[r]);
    const std::size_t before = problems.lines.size();

    auto number = [&](std::string_view name) -> double {
      const auto c = col(name);
      const std::string& cell = row[*c];
      auto v = csv::parse_number(cell);
      if (!v) {
        problems.add(ErrorCode::kParse, line,
                     cell.empty() ? fmt::format("empty value in column {}", name)
                                  : fmt::format("non-numeric value '{}' in column {}", cell, name));
        return std::nan("");
      }
      return *v;
    };
    auto optional_number = [&](std::optional<std::size_t> c,
                               std::string_view name) -> std::optional<double> {
      if (!c || row[*c].empty()) return std::nullopt;
      auto v = csv::parse_number(row[*c]);
      if (!v) {
        problems.add(ErrorCode::kParse, line,
                     fmt::format("non-numeric value '{}' in column {}", row[*c], name));
      }
      return v;
    };

    FarmRecord rec;
    rec.industry = spec.id;
    rec.farm_id = row[*col("farm_id")];
    if (rec.farm_id.empty()) problems.add(ErrorCode::kValidation, line, "empty farm_id");
    const double year = number("year");
    if (year != std::floor(year)) {
      problems.add(ErrorCode::kValidation, line, "year must be an integer");
    }
    rec.year = static_cast<int>(year);
    rec.weight = number("weight");
    if (rec.weight <= 0.0) {
      problems.add(ErrorCode::kValidation, line,
                   fmt::format("weight must be positive, got {}", rec.weight));
    }
    rec.region = row[*col("region")];
    if (!schema.region_price_groups.count(rec.region)) {
      problems.add(ErrorCode::kUnknownRegion, line, "unknown region '" + rec.region + "'");
    }
    rec.area_operated = number("area_operated");
    if (rec.area_operated < 0.0) {
      problems.add(ErrorCode::kInvalidArea, line, "area_operated must be nonnegative");
    }
    if (spec.area_rule == AreaRule::kTotalHorticulturalArea) {
      for (const auto& o : spec.outputs) {
        const double a = number(area_col(o.name));
        if (a < 0.0) problems.add(ErrorCode::kInvalidArea, line, area_col(o.name) + " is negative");
        rec.output_areas.push_back(a);
      }
    }

    auto check_quantity = [&](const std::string& name, double v) {
      if (v < 0.0 && !schema.allow_negative_quantities) {
        problems.add(ErrorCode::kValidation, line,
                     fmt::format("{} must be nonnegative, got {}", name, v));
      }
    };
    for (const auto& n : spec.netput_names()) {
      const double v = number(q_col(n));
      check_quantity(q_col(n), v);
      rec.quantities.push_back(v);
    }
    rec.numeraire_quantity = number(q_col(spec.numeraire_name));
    check_quantity(q_col(spec.numeraire_name), rec.numeraire_quantity);

    for (const auto& n : spec.netput_names()) {
      const std::string name = p_col(n);
      double price = std::nan("");
      const auto c = col(name);
      if (n == kWaterName && water_table && (!c || row[*c].empty())) {
        auto resolved = schema.water_price(rec.region, rec.year);
        if (!resolved) {
          problems.add(ErrorCode::kValidation, line,
                       fmt::format("no water price for region {} in {}", rec.region, rec.year));
        } else {
          price = *resolved;
          ++local.water_price_resolved;
        }
      } else {
        price = number(name);
      }
      if (price <= 0.0) {
        problems.add(ErrorCode::kInvalidPrice, line,
                     fmt::format("{} must be positive, got {}", name, price));
      }
      rec.raw_prices.push_back(price);
    }
    rec.p0 = number(kP0Column);
    if (rec.p0 <= 0.0) {
      problems.add(ErrorCode::kInvalidPrice, line,
                   fmt::format("{} must be positive, got {}", kP0Column, rec.p0));
    }

    const auto zcols = spec.fixed_column_names();
    for (const auto& n : zcols) rec.fixed.push_back(number(z_col(n)));
    const auto total = optional_number(c_total, kTotalCapitalColumn);
    const auto land = optional_number(c_land, kLandValueColumn);
    const auto cap = std::find(zcols.begin(), zcols.end(), "capital");
    const auto ent = std::find(zcols.begin(), zcols.end(), "entitlement_value");
    if (cap != zcols.end() && ent != zcols.end() && total && land) {
      double& capital = rec.fixed[static_cast<std::size_t>(cap - zcols.begin())];
      const double entitlement = rec.fixed[static_cast<std::size_t>(ent - zcols.begin())];
      try {
        const CapitalImputation ci = impute_capital(capital, *total, *land, entitlement);
        capital = ci.value;
        local.capital_imputed += ci.imputed;
        local.capital_floored += ci.floored;
      } catch (const Error& e) {
        problems.add(e.code(), line, e.what());
      }
    }
    for (const auto& n : spec.control_names) rec.controls.push_back(number(n));
    rec.wages_paid = optional_number(c_wages, kWagesColumn);

    if (spec.per_hectare && problems.lines.size() == before && !(area_divisor(spec, rec) > 0.0)) {
      problems.add(ErrorCode::kInvalidArea, line,
                   fmt::format("per-hectare industry needs positive {}", to_string(spec.area_rule)));
    }
    records.push_back(std::move(rec));
  }

  if (!problems.lines.empty()) {
    const ErrorCode code =
        problems.codes.size() == 1 ? *problems.codes.begin() : ErrorCode::kValidation;
    throw Error(code, fmt::format("{} invalid panel row(s)", problems.lines.size()),
                problems.lines);
  }
  FarmPanel panel(std::move(records));
  local.rows = panel.size();
  if (report) *report = std::move(local);
  return panel;
}

FarmPanel load_panel(const std::filesystem::path& path, const PanelSchema& schema,
                     PanelLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open panel " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_panel(buf.str(), schema, report);
}

std::string format_panel(const FarmPanel& panel, const PanelSchema& schema) {
  std::vector<IndustryId> ids = panel.industries();
  std::vector<std::string> header = schema.columns_for(ids);
  const bool wages = std::any_of(panel.records().begin(), panel.records().end(),
                                 [](const FarmRecord& r) { return r.wages_paid.has_value(); });
  if (wages) header.emplace_back(kWagesColumn);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < header.size(); ++i) pos[header[i]] = i;

  std::ostringstream out;
  out << "# schema=" << schema.version << '\n';
  csv::write_row(out, header);
  std::vector<std::string> row(header.size());
  for (const FarmRecord& r : panel.records()) {
    const IndustrySpec& spec = industry_spec(r.industry);
    std::fill(row.begin(), row.end(), std::string());
    auto set = [&](const std::string& c, double v) { row[pos.at(c)] = csv::format_number(v); };
    row[pos.at("farm_id")] = r.farm_id;
    row[pos.at("year")] = std::to_string(r.year);
    row[pos.at("industry")] = std::string(to_string(r.industry));
    set("weight", r.weight);
    row[pos.at("region")] = r.region;
    set("area_operated", r.area_operated);
    if (spec.area_rule == AreaRule::kTotalHorticulturalArea) {
      for (std::size_t i = 0; i < spec.output_count(); ++i) {
        set(area_col(spec.outputs[i].name), r.output_areas[i]);
      }
    }
    const auto names = spec.netput_names();
    for (std::size_t g = 0; g < names.size(); ++g) {
      set(q_col(names[g]), r.quantities[g]);
      set(p_col(names[g]), r.raw_prices[g]);
    }
    set(q_col(spec.numeraire_name), r.numeraire_quantity);
    set(std::string(kP0Column), r.p0);
    const auto zcols = spec.fixed_column_names();
    for (std::size_t f = 0; f < zcols.size(); ++f) set(z_col(zcols[f]), r.fixed[f]);
    for (std::size_t c = 0; c < spec.control_count(); ++c) set(spec.control_names[c], r.controls[c]);
    if (r.wages_paid) set(std::string(kWagesColumn), *r.wages_paid);
    csv::write_row(out, row);
  }
  return out.str();
}

void save_panel(const FarmPanel& panel, const std::filesystem::path& path,
                const PanelSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write panel " + path.string());
  out << format_panel(panel, schema);
  if (!out) throw Error(ErrorCode::kIo, "failed writing panel " + path.string());
}

}  // namespace netputsim
