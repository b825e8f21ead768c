#pragma once

// Tabular results with unit and provenance annotations per column, emitted as
// RFC-4180 CSV or JSON. Floats are written in shortest round-trip form, so
// identical tables produce identical bytes.

#include <json.hpp>

#include <charconv>
#include <stdexcept>
#include <string>
#include <vector>

namespace indirac {

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless
  std::string note;  // short meaning or "plumbing"
};

struct ResultTable {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered key/value

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size())
      throw std::invalid_argument("ResultTable: row width differs from column count");
    rows.push_back(std::move(row));
  }

  void validate() const {
    for (const auto& r : rows)
      if (r.size() != columns.size()) throw std::logic_error("ResultTable: ragged rows");
    for (const auto& c : columns)
      if (c.unit.empty()) throw std::logic_error("ResultTable: column without unit: " + c.name);
  }
};

namespace detail {

inline std::string shortest_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string to_csv(const ResultTable& t) {
  t.validate();
  std::string out;
  for (size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += detail::csv_quote(t.columns[c].name + " (" + t.columns[c].unit + ")");
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += detail::shortest_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline std::string to_json(const ResultTable& t) {
  t.validate();
  nlohmann::ordered_json j;
  j["columns"] = nlohmann::ordered_json::array();
  j["units"] = nlohmann::ordered_json::array();
  for (const auto& c : t.columns) {
    j["columns"].push_back(c.name);
    j["units"].push_back(c.unit);
  }
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) j["rows"].push_back(row);
  auto meta = nlohmann::ordered_json::object();
  for (const auto& c : t.columns) meta["column:" + c.name] = c.note;
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

/// Inverse of to_json for the column/unit/row payload.
inline ResultTable table_from_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  ResultTable t;
  const auto& cols = j.at("columns");
  const auto& units = j.at("units");
  for (size_t c = 0; c < cols.size(); ++c) {
    Column col;
    col.name = cols[c].get<std::string>();
    col.unit = units[c].get<std::string>();
    if (j.contains("metadata")) {
      const auto key = "column:" + col.name;
      if (j["metadata"].contains(key)) col.note = j["metadata"][key].get<std::string>();
    }
    t.columns.push_back(col);
  }
  for (const auto& row : j.at("rows")) t.rows.push_back(row.get<std::vector<double>>());
  if (j.contains("metadata"))
    for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it)
      if (it.key().rfind("column:", 0) != 0)
        t.metadata.emplace_back(it.key(), it.value().get<std::string>());
  t.validate();
  return t;
}

}  // namespace indirac
