#include "chanrad/emit.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "chanrad/error.hpp"

namespace chanrad {

using json = nlohmann::ordered_json;

std::string format_number(double value, int precision) {
  if (!std::isfinite(value)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

double round_to_precision(double value, int precision) {
  if (!std::isfinite(value)) return value;
  const std::string s = format_number(value, precision);
  double out = 0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

namespace {

std::string csv_cell(const Cell& cell, int precision) {
  struct Visitor {
    int precision;
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v, precision); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{precision}, cell);
}

json json_cell(const Cell& cell, int precision) {
  struct Visitor {
    int precision;
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return round_to_precision(v, precision);
    }
    json operator()(std::int64_t v) const { return v; }
    json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{precision}, cell);
}

std::string emit_csv(const Table& table, const RunConfig& cfg) {
  std::string out;
  out += std::string("# schema: ") + kSchemaVersion + "\n";
  out += "# kind: " + table.kind + "\n";
  out += "# config: " + to_json(cfg).dump() + "\n";
  if (!table.diagnostics.is_null()) out += "# diagnostics: " + table.diagnostics.dump() + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_cell(row[c], cfg.precision);
    out += "\n";
  }
  return out;
}

std::string emit_json(const Table& table, const RunConfig& cfg) {
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["kind"] = table.kind;
  doc["config"] = to_json(cfg);
  json data = json::array();
  for (const auto& row : table.rows) {
    json rec = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) rec[table.columns[c]] = json_cell(row[c], cfg.precision);
    data.push_back(std::move(rec));
  }
  doc["data"] = std::move(data);
  if (!table.diagnostics.is_null()) doc["diagnostics"] = table.diagnostics;
  return doc.dump(2) + "\n";
}

}  // namespace

std::string emit(const Table& table, const RunConfig& cfg) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw Error(Errc::invalid_input, "row width does not match the header of " + table.kind);
  return cfg.format == OutputFormat::csv ? emit_csv(table, cfg) : emit_json(table, cfg);
}

void write_atomically(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::io, "cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(Errc::io, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::io, "cannot move output into place at " + path);
  }
}

}  // namespace chanrad
