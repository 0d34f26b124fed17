#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace geosched::csv {

/// One data row with its 1-based line number in the source file.
struct Row {
  long line;
  std::vector<std::string> fields;
};

/// Reads a comma-separated file whose first line must equal `header`
/// exactly (after trimming). Blank lines are skipped. No quoting support:
/// none of the project's schemas carry embedded commas.
std::vector<Row> read(const std::filesystem::path& path,
                      const std::vector<std::string>& header);

double parse_double(std::string_view text, long line, std::string_view column);
long long parse_int(std::string_view text, long line, std::string_view column);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double value);

}  // namespace geosched::csv
