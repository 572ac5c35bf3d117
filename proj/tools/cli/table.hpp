#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mwassoc::cli {

using Cell = std::variant<std::string, long long, double, bool>;

/// A result table plus trailing summary values.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

/// Shortest "general" form with 10 significant digits, C locale.
std::string format_number(double x);

/// Header line, one line per row, then "# key=value" summary lines. LF endings.
std::string to_csv(const Table& t);

/// {"command", "columns", "rows": [{col: value}], "summary": {}} with the same
/// rounded numbers as the CSV.
std::string to_json(const Table& t);

/// Write through a temporary file in the same directory and rename it into
/// place, so a failed run never leaves a partial table behind.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace mwassoc::cli
