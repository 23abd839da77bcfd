#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "chanrad/config.hpp"
#include "json.hpp"

namespace chanrad {

inline constexpr const char* kSchemaVersion = "chanrad/1";

// Empty cell (written as an empty CSV field / JSON null).
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

/// Column-oriented scan product ready for serialization.
struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json diagnostics;  // null when absent
};

// Shortest decimal form with at most `precision` significant digits,
// locale-independent.
std::string format_number(double value, int precision);
double round_to_precision(double value, int precision);

/// CSV: `#`-prefixed preamble (schema, kind, one-line config echo, optional
/// diagnostics), header row, data rows, LF endings.
/// JSON: {"schema", "kind", "config", "data": [row objects], "diagnostics"?}.
std::string emit(const Table& table, const RunConfig& cfg);

// Writes via a temporary sibling file and an atomic rename; throws Errc::io.
void write_atomically(const std::string& path, const std::string& bytes);

}  // namespace chanrad
