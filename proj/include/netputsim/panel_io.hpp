#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netputsim/types.hpp"

namespace netputsim {

inline constexpr std::string_view kPanelSchemaVersion = "netputsim.panel/1";

// Column layout of the panel CSV. One file may mix industries; each row is
// checked against the columns its own industry needs.
struct PanelSchema {
  std::string version{kPanelSchemaVersion};
  std::map<std::string, std::string> units;  // column -> unit
  // Allocation water price ($/ML) per (price group, year). Used when a row
  // leaves praw_water empty or the column is absent.
  std::map<std::pair<std::string, int>, double> water_prices;
  std::map<std::string, std::string> region_price_groups;
  // Synthetic panels with large noise can produce negative quantities; the
  // survey data never does, so they are rejected unless this is set.
  bool allow_negative_quantities = false;

  static PanelSchema standard();

  static const std::vector<std::string>& identifier_columns();
  static const std::vector<std::string>& optional_columns();
  std::vector<std::string> required_columns(IndustryId id) const;
  // Header used when writing a panel holding the given industries.
  std::vector<std::string> columns_for(const std::vector<IndustryId>& ids) const;
  std::optional<double> water_price(std::string_view region, int year) const;
};

struct PanelLoadReport {
  std::size_t rows = 0;
  std::size_t capital_imputed = 0;
  std::size_t capital_floored = 0;
  std::size_t water_price_resolved = 0;
  std::vector<std::string> comments;
};

FarmPanel load_panel(const std::filesystem::path& path, const PanelSchema& schema,
                     PanelLoadReport* report = nullptr);
FarmPanel parse_panel(std::string_view text, const PanelSchema& schema,
                      PanelLoadReport* report = nullptr);
void save_panel(const FarmPanel& panel, const std::filesystem::path& path,
                const PanelSchema& schema = PanelSchema::standard());
std::string format_panel(const FarmPanel& panel, const PanelSchema& schema = PanelSchema::standard());

struct CapitalImputation {
  double value = 0.0;
  bool imputed = false;
  bool floored = false;  // residual was negative and set to zero
};

// Zero recorded capital is replaced by total - land - entitlements.
CapitalImputation impute_capital(double recorded_capital, double total_capital,
                                 double land_value, double entitlement_value);

double materials_price_index(const std::map<std::string, double>& component_indices,
                             const std::map<std::string, double>& expenditure_shares);

// Median of wages / weeks over positive-week records (mean of the middle
// pair for even counts).
double labour_price(const FarmPanel& panel);
double median(std::vector<double> values);

double weighted_mean(std::span<const double> values, std::span<const double> weights);
// Cumulative-weight median: the smallest value whose cumulative weight reaches
// half the total, averaged with the next value when it lands exactly on half.
double weighted_median(std::span<const double> values, std::span<const double> weights);
// Population form: sqrt(sum w (x - mean)^2 / sum w).
double weighted_sd(std::span<const double> values, std::span<const double> weights);

enum class Statistic { kMean, kMedian, kSd };
Statistic parse_statistic(std::string_view name);
std::string_view to_string(Statistic s);

struct SummaryRow {
  IndustryId industry;
  std::string column;
  std::string unit;
  double value = 0.0;
  std::size_t farms = 0;
};

// Survey-weighted statistic of every quantity, price and fixed-input column,
// per industry.
std::vector<SummaryRow> weighted_summary(const FarmPanel& panel, Statistic statistic,
                                         const PanelSchema& schema = PanelSchema::standard());

}  // namespace netputsim
