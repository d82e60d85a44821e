#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "smalldev/curves.hpp"

namespace smalldev::cli {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json };

Format parse_format(std::string_view s);

/// Rectangular result with string cells; numbers are preformatted with format_double.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

void write_table(std::ostream& os, const Table& t, Format f);
void write_json(std::ostream& os, const Json& j, Format f);

Table to_table(const BoundCurve& c);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  long column(std::string_view name) const;
  double number(std::size_t row, long col) const;
};

CsvData read_csv(const std::string& path);

/// Reads a curve written by write_csv or any result table with an r/epsilon first
/// column and phi or H bound columns.
BoundCurve read_curve(const std::string& path);

/// Comma-separated numbers, or geom:a:b:n for n log-spaced values from a to b.
std::vector<double> parse_list(std::string_view s);

/// Key=value lines ('#' comments, blank lines ignored), in file order.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

/// Thrown for user mistakes that should exit with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace smalldev::cli
