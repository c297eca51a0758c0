#pragma once

// Tabular results and the grid syntax used by the map commands.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "daa/errors.hpp"

namespace daa {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    detail::require(row.size() == columns.size(), "row width does not match the header");
    rows.push_back(std::move(row));
  }
};

/// Ten significant digits; non-finite values as inf, -inf or nan.
inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

inline std::string format_cell(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<bool>(cell) ? "true" : "false";
}

inline void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

/// "start:stop:step" (inclusive of stop up to rounding) or "a,b,c".
inline std::vector<double> parse_grid(std::string_view text) {
  auto to_double = [&](std::string_view part) {
    const std::string s(part);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw DomainError("invalid number '" + s + "' in grid '" + std::string(text) + "'");
    }
    if (used != s.size()) throw DomainError("invalid number '" + s + "' in grid '" + std::string(text) + "'");
    return v;
  };

  std::vector<double> values;
  if (text.find(':') != std::string_view::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    detail::require(second != std::string_view::npos, "range grid needs start:stop:step");
    const double start = to_double(text.substr(0, first));
    const double stop = to_double(text.substr(first + 1, second - first - 1));
    const double step = to_double(text.substr(second + 1));
    detail::require(step > 0.0 && stop >= start, "range grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::int64_t i = 0; i < count; ++i) {
      // Round away the accumulated binary error (0.30000000000000004 -> 0.3).
      values.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    std::size_t begin = 0;
    while (begin <= text.size()) {
      const auto end = text.find(',', begin);
      const auto part = text.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin);
      if (!part.empty()) values.push_back(to_double(part));
      if (end == std::string_view::npos) break;
      begin = end + 1;
    }
  }
  detail::require(!values.empty(), "grid '" + std::string(text) + "' is empty");
  return values;
}

}  // namespace daa
