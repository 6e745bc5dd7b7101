#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mldnn {

/// A parsed comma-separated file. Blank lines and lines starting with '#'
/// are skipped; fields are trimmed of surrounding whitespace. No quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each row, for error messages.
  std::vector<std::size_t> line_numbers;

  /// Index of a header column, or npos.
  std::size_t column(std::string_view name) const noexcept;
};

/// Throws ParseError when a row's field count differs from the header's.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Whole file as bytes; throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Strict decimal parse of one cell; throws ParseError naming line and column.
double parse_number(std::string_view cell, std::size_t line, std::string_view column);

/// Shortest text that parses back to exactly the same double.
std::string format_shortest(double value);
/// Fixed-point with the given number of decimals.
std::string format_fixed(double value, int decimals);

}  // namespace mldnn
