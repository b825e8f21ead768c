#pragma once

// Scenario configuration: flat key = value lines under [run] and [params]
// section headers. Parsing is strict; unknown keys, unknown scenarios and
// malformed numbers are reported with their line number.

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace indirac {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhysicsViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { ac_theorem, gauge_removal, quantization, ring_sweep, filter_design };
enum class OutputFormat { csv, json };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::ac_theorem: return "ac-theorem";
    case Scenario::gauge_removal: return "gauge-removal";
    case Scenario::quantization: return "quantization";
    case Scenario::ring_sweep: return "ring-sweep";
    case Scenario::filter_design: return "filter-design";
  }
  return "?";
}

struct RunConfig {
  Scenario scenario = Scenario::quantization;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;  // empty: stdout
  unsigned seed = 42;
  int jobs = 1;
  std::map<std::string, double> numbers;
  std::map<std::string, std::vector<double>> lists;
  std::map<std::string, std::string> strings;

  double num(const std::string& key) const { return numbers.at(key); }
  double num_or(const std::string& key, double fallback) const {
    auto it = numbers.find(key);
    return it == numbers.end() ? fallback : it->second;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct KeySpec {
  bool required = false;
  bool is_list = false;
  bool is_string = false;
};

inline const std::map<std::string, std::map<std::string, KeySpec>>& scenario_keys() {
  static const std::map<std::string, std::map<std::string, KeySpec>> keys = {
      {"ac-theorem",
       {{"flux_quanta", {true, true, false}},
        {"lattice_l", {true, false, false}},
        {"lattice_l_check", {false, false, false}},
        {"charge_e", {false, false, false}}}},
      {"gauge-removal",
       {{"flux_phi", {true, false, false}},
        {"l0", {true, false, false}},
        {"grid_n", {false, false, false}},
        {"levels", {false, false, false}},
        {"psi", {false, false, true}}}},
      {"quantization",
       {{"flux_phi", {true, false, false}},
        {"l0", {true, false, false}},
        {"n_max", {true, false, false}}}},
      {"ring-sweep",
       {{"rho", {true, false, false}},
        {"m_eff", {false, false, false}},
        {"theta", {true, false, false}},
        {"b_pl", {true, false, false}},
        {"charge_e", {false, false, false}},
        {"hbar", {false, false, false}},
        {"vary", {true, false, true}},
        {"count", {true, false, false}},
        {"start", {false, false, false}},
        {"stop", {false, false, false}},
        {"energy", {false, false, false}},
        {"comb", {false, false, false}},
        {"debug_junction_asymmetry", {false, false, false}}}},
      {"filter-design",
       {{"rho", {true, false, false}},
        {"n_max", {true, false, false}},
        {"theta", {false, false, false}},
        {"charge_e", {false, false, false}}}}};
  return keys;
}

inline double parse_number(const std::string& v, int line_no, const std::string& key) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                      "' has non-numeric value '" + v + "'");
  }
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;
  std::string scenario_str;
  std::map<std::string, std::pair<std::string, int>> raw_params;  // key -> (value, line)

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = detail::trim(t.substr(1, t.size() - 2));
      if (section != "run" && section != "params")
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section +
                          "]; expected [run] or [params]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" + t + "'");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' appears before any section header");

    if (section == "run") {
      if (key == "scenario") scenario_str = val;
      else if (key == "format") {
        if (val == "csv") cfg.format = OutputFormat::csv;
        else if (val == "json") cfg.format = OutputFormat::json;
        else throw ConfigError("line " + std::to_string(line_no) + ": format must be csv or json");
      } else if (key == "out") cfg.output_path = val;
      else if (key == "seed") cfg.seed = static_cast<unsigned>(detail::parse_number(val, line_no, key));
      else if (key == "jobs") cfg.jobs = static_cast<int>(detail::parse_number(val, line_no, key));
      else throw ConfigError("line " + std::to_string(line_no) + ": unknown [run] key '" + key + "'");
    } else {
      if (raw_params.count(key))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      raw_params[key] = {val, line_no};
    }
  }

  if (scenario_str.empty()) throw ConfigError("missing required key 'scenario' in [run]");
  const auto& table = detail::scenario_keys();
  const auto sit = table.find(scenario_str);
  if (sit == table.end()) {
    std::string valid;
    for (const auto& [name, _] : table) valid += (valid.empty() ? "" : ", ") + name;
    throw ConfigError("unknown scenario '" + scenario_str + "'; valid scenarios: " + valid);
  }
  if (scenario_str == "ac-theorem") cfg.scenario = Scenario::ac_theorem;
  else if (scenario_str == "gauge-removal") cfg.scenario = Scenario::gauge_removal;
  else if (scenario_str == "quantization") cfg.scenario = Scenario::quantization;
  else if (scenario_str == "ring-sweep") cfg.scenario = Scenario::ring_sweep;
  else cfg.scenario = Scenario::filter_design;

  for (const auto& [key, vp] : raw_params) {
    const auto kit = sit->second.find(key);
    if (kit == sit->second.end())
      throw ConfigError("line " + std::to_string(vp.second) + ": key '" + key +
                        "' is not accepted by scenario " + scenario_str);
    if (kit->second.is_string) {
      cfg.strings[key] = vp.first;
    } else if (kit->second.is_list) {
      std::vector<double> vals;
      std::istringstream ls(vp.first);
      std::string item;
      while (std::getline(ls, item, ','))
        vals.push_back(detail::parse_number(detail::trim(item), vp.second, key));
      if (vals.empty())
        throw ConfigError("line " + std::to_string(vp.second) + ": key '" + key + "' list is empty");
      cfg.lists[key] = vals;
    } else {
      cfg.numbers[key] = detail::parse_number(vp.first, vp.second, key);
    }
  }
  for (const auto& [key, spec] : sit->second) {
    if (!spec.required) continue;
    const bool present = cfg.numbers.count(key) || cfg.lists.count(key) || cfg.strings.count(key);
    if (!present)
      throw ConfigError("scenario " + scenario_str + " requires key '" + key + "' in [params]");
  }

  // domain validation
  if (cfg.scenario == Scenario::ring_sweep) {
    if (!(cfg.num("rho") > 0.0))
      throw ConfigError("invalid rho: the ring radius must be > 0");
    if (!(cfg.num_or("m_eff", 0.5) > 0.0))
      throw ConfigError("invalid m_eff: the effective mass must be > 0");
    const std::string vary = cfg.strings.at("vary");
    if (vary != "energy" && vary != "b_pl" && vary != "theta")
      throw ConfigError("invalid vary: expected energy, b_pl or theta");
    if (!(cfg.num("count") >= 1)) throw ConfigError("invalid count: need at least one sweep point");
  }
  if (cfg.scenario == Scenario::filter_design && !(cfg.num("rho") > 0.0))
    throw ConfigError("invalid rho: the ring radius must be > 0");
  if (cfg.scenario == Scenario::quantization) {
    if (!(cfg.num("l0") > 0.0)) throw ConfigError("invalid l0: the reference length must be > 0");
    if (cfg.num("flux_phi") == 0.0)
      throw ConfigError("invalid flux_phi: zero flux admits no quantization");
  }
  if (cfg.scenario == Scenario::gauge_removal && !(cfg.num("l0") > 0.0))
    throw ConfigError("invalid l0: the reference length must be > 0");
  if (cfg.scenario == Scenario::ac_theorem) {
    const double l = cfg.num("lattice_l");
    if (!(l >= 8.0)) throw ConfigError("invalid lattice_l: lattice must be at least 8");
  }
  if (cfg.jobs < 1) throw ConfigError("invalid jobs: must be >= 1");
  return cfg;
}

}  // namespace indirac
