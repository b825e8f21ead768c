// Exercises the binary's exit-code contract: 0 success, 1 usage/config error,
// 2 physics-invariant violation. Also checks byte-stable output across runs.
// Usage: cli_exit_codes <path-to-binary>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_exit_codes <binary>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const std::string dir = "cli_exit_codes_tmp";
  std::system(("mkdir -p " + dir).c_str());

  write_file(dir + "/good.cfg",
             "[run]\nscenario = quantization\n[params]\nflux_phi = 1\nl0 = 1\nn_max = 4\n");
  write_file(dir + "/typo.cfg", "[run]\nscenario = ring-sweap\n");
  write_file(dir + "/breach.cfg",
             "[run]\nscenario = ring-sweep\n[params]\nrho = 1\ntheta = 0.5\nb_pl = 0\nvary = "
             "energy\ncount = 3\ndebug_junction_asymmetry = 0.05\n");
  write_file(dir + "/sweep.cfg",
             "[run]\nscenario = ring-sweep\nformat = json\n[params]\nrho = 1\ntheta = 1.2\nb_pl = "
             "0.1\nvary = energy\ncount = 6\n");

  expect(run(bin + " validate " + dir + "/good.cfg").exit_code == 0, "validate good config -> 0");
  expect(run(bin + " validate " + dir + "/typo.cfg").exit_code == 1, "validate unknown scenario -> 1");
  expect(run(bin + " validate " + dir + "/missing.cfg").exit_code == 1, "missing file -> 1");
  expect(run(bin).exit_code == 1, "no subcommand -> usage error");

  const RunResult good = run(bin + " run " + dir + "/good.cfg");
  expect(good.exit_code == 0, "run good config -> 0");
  expect(good.out.find("x_perp (length)") != std::string::npos, "csv header with unit suffix");

  expect(run(bin + " run " + dir + "/breach.cfg").exit_code == 2,
         "detuned junction breaks unitarity -> 2");

  expect(run(bin + " run " + dir + "/good.cfg --out /nonexistent_dir_zzz/x.csv").exit_code == 1,
         "unwritable output path -> 1");

  const RunResult a = run(bin + " run " + dir + "/sweep.cfg");
  const RunResult b = run(bin + " run " + dir + "/sweep.cfg --jobs 4");
  expect(a.exit_code == 0 && b.exit_code == 0, "sweep runs succeed");
  expect(!a.out.empty() && a.out == b.out, "byte-identical output, independent of --jobs");

  const RunResult c = run("INPLANE_DIRAC_SEED=7 " + bin + " run " + dir + "/sweep.cfg");
  expect(c.exit_code == 0 && c.out.find("\"seed\": \"7\"") != std::string::npos,
         "environment seed override lands in the metadata");

  std::system(("rm -rf " + dir).c_str());
  if (failures) {
    std::printf("%d failure(s)\n", failures);
    return 1;
  }
  std::printf("all exit-code checks passed\n");
  return 0;
}
