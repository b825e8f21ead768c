// Batch front-end: parse a scenario config, run the pipeline, emit a table.
//
// Exit codes: 0 success, 1 usage or config error, 2 physics-invariant
// violation (unitarity breach, count mismatch, unresolved spectral gap).

#include "inplane_dirac/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw indirac::ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

indirac::RunConfig load(const std::string& path, int jobs_override,
                        const std::string& format_override, const std::string& out_override) {
  indirac::RunConfig cfg = indirac::parse_config(read_file(path));
  if (const char* env_seed = std::getenv("INPLANE_DIRAC_SEED"))
    cfg.seed = static_cast<unsigned>(std::strtoul(env_seed, nullptr, 10));
  if (jobs_override > 0) cfg.jobs = jobs_override;
  if (!format_override.empty())
    cfg.format = format_override == "json" ? indirac::OutputFormat::json : indirac::OutputFormat::csv;
  if (!out_override.empty()) cfg.output_path = out_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"in-plane Dirac transport toolkit"};
  app.require_subcommand(1);

  std::string config_path, format_override, out_override;
  int jobs_override = 0;

  CLI::App* run = app.add_subcommand("run", "run a scenario config and emit its table");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--jobs", jobs_override, "worker threads for sweep points");
  run->add_option("--format", format_override, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", out_override, "output path (default: stdout)");

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    if (validate->parsed()) {
      load(config_path, 0, "", "");
      std::cout << "ok\n";
      return 0;
    }
    const indirac::RunConfig cfg = load(config_path, jobs_override, format_override, out_override);
    const indirac::ResultTable table = indirac::run_scenario(cfg);
    const std::string payload = indirac::emit_table(table, cfg.format);
    if (cfg.output_path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(cfg.output_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write output file: " + cfg.output_path);
      out << payload;
    }
    return 0;
  } catch (const indirac::PhysicsViolationError& e) {
    std::cerr << "physics violation: " << e.what() << "\n";
    return 2;
  } catch (const indirac::AmbiguousCountError& e) {
    std::cerr << "physics violation: " << e.what() << "\n";
    return 2;
  } catch (const indirac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
