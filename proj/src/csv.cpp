#include "geosched/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "geosched/errors.hpp"

namespace geosched::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    auto piece = line.substr(start, pos == std::string_view::npos ? line.size() - start
                                                                  : pos - start);
    out.emplace_back(trim(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<Row> read(const std::filesystem::path& path,
                      const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path.string());

  std::string line;
  long line_no = 0;
  bool have_header = false;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw IngestError(path.string() + ": header must be '" + expected + "'", line_no);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw IngestError(path.string() + ": expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()),
                        line_no);
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (!have_header) throw IngestError(path.string() + ": empty file, header required");
  return rows;
}

double parse_double(std::string_view text, long line, std::string_view column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw IngestError("column '" + std::string(column) + "': not a number: '" +
                          std::string(text) + "'",
                      line);
  }
  return value;
}

long long parse_int(std::string_view text, long line, std::string_view column) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IngestError("column '" + std::string(column) + "': not an integer: '" +
                          std::string(text) + "'",
                      line);
  }
  return value;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace geosched::csv
