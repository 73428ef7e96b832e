#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netputsim::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
  std::vector<std::string> comments;      // leading '#' lines, marker stripped

  std::optional<std::size_t> column(std::string_view name) const;
};

// Comma-separated, optional double quotes around fields, '#' comment lines.
Table parse(std::string_view text);
Table read(const std::filesystem::path& path);

// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// 17 significant digits (round-trip exact) unless pretty is set.
std::string format_number(double value, bool pretty = false);
std::optional<double> parse_number(std::string_view text);

}  // namespace netputsim::csv
