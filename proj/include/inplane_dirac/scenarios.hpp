#pragma once

// Scenario pipelines behind the batch front-end. Each scenario maps a parsed
// config onto module calls and emits a ResultTable; physics-invariant breaches
// raise PhysicsViolationError (exit code 2 at the CLI).

#include "inplane_dirac/gauge_field.hpp"
#include "inplane_dirac/gauge_removal.hpp"
#include "inplane_dirac/result_table.hpp"
#include "inplane_dirac/ring.hpp"
#include "inplane_dirac/ring_scattering.hpp"
#include "inplane_dirac/run_config.hpp"
#include "inplane_dirac/zero_modes.hpp"

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace indirac {

namespace detail {

/// Order-stable work pool: runs fn(i) for i in [0, n) on `jobs` threads; the
/// caller writes results into pre-indexed slots, so assembly order never
/// depends on scheduling.
template <typename F>
void parallel_for_indexed(int n, int jobs, F&& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline ResultTable run_ac_theorem(const RunConfig& cfg) {
  const auto& quanta = cfg.lists.at("flux_quanta");
  const int size_l = static_cast<int>(cfg.num("lattice_l"));
  const int size_check = static_cast<int>(cfg.num_or("lattice_l_check", 0));
  const double charge_e = cfg.num_or("charge_e", 1.0);

  ResultTable t;
  t.columns = {{"flux_quanta", "Phi0", "total flux in flux quanta"},
               {"lattice_l", "sites", "plumbing"},
               {"predicted_n", "1", "integer part of the flux"},
               {"predicted_strict", "1", "strict square-integrability count"},
               {"observed_n", "1", "gap-counted kernel dimension"},
               {"gap_ratio", "1", "sv[N] / sv[N-1] at the kernel edge"},
               {"sv_first_nonzero", "1/length", "smallest continuum singular value"},
               {"agrees", "1", "predicted == observed"},
               {"size_consistent", "1", "count stable against the check lattice"}};
  t.metadata.emplace_back("scenario", "ac-theorem");
  t.metadata.emplace_back("seed", std::to_string(cfg.seed));

  const int n = static_cast<int>(quanta.size());
  std::vector<std::vector<double>> rows(n);
  parallel_for_indexed(n, cfg.jobs, [&](int i) {
    const double nf = quanta[i];
    ZeroModeReport rep;
    bool consistent = true;
    if (size_check > 0) {
      rep = ac_theorem_check_two_sizes(nf, size_check, size_l, charge_e);
      consistent = rep.size_consistent;
    } else {
      rep = ac_theorem_check(gaussian_flux_tube(size_l, nf, 1.0, charge_e));
    }
    const double sv_edge = rep.observed_n < static_cast<int>(rep.singular_values.size())
                               ? rep.singular_values[rep.observed_n]
                               : 0.0;
    rows[i] = {nf,
               double(size_l),
               double(rep.predicted_n),
               double(rep.predicted_strict),
               double(rep.observed_n),
               rep.gap_ratio,
               sv_edge,
               rep.predicted_n == rep.observed_n ? 1.0 : 0.0,
               consistent ? 1.0 : 0.0};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  for (const auto& r : t.rows)
    if (r[7] == 0.0 || r[8] == 0.0)
      throw PhysicsViolationError("ac-theorem: observed count disagrees with the flux integer part");
  return t;
}

inline ResultTable run_gauge_removal(const RunConfig& cfg) {
  FieldConfig field;
  field.flux_phi = cfg.num("flux_phi");
  field.l0 = cfg.num("l0");
  const int base_n = static_cast<int>(cfg.num_or("grid_n", 33));
  const int levels = static_cast<int>(cfg.num_or("levels", 3));
  const std::string psi_kind = cfg.strings.count("psi") ? cfg.strings.at("psi") : "constant";
  if (psi_kind != "constant" && psi_kind != "entire")
    throw ConfigError("gauge-removal: psi must be 'constant' or 'entire'");

  ResultTable t;
  t.columns = {{"grid_n", "nodes", "plumbing"},
               {"h", "length", "grid spacing"},
               {"residual", "1/length", "max norm of the Dirac operator on the rebuilt state"},
               {"order", "1", "log2 residual ratio against the previous level"}};
  t.metadata.emplace_back("scenario", "gauge-removal");
  t.metadata.emplace_back("psi", psi_kind);

  double prev = 0.0;
  for (int level = 0; level < levels; ++level) {
    const int n = (base_n - 1) * (1 << level) + 1;
    const double b0 = -1.0, p0 = field.l0 * 0.8;
    const double extent = 1.2 * field.l0;
    const double h = extent / (n - 1);
    auto psi = SampledSpinorField::sample(n, n, b0, p0, 2.0 / (n - 1), h, [&](double xb, double xp) {
      Spinor2 v;
      if (psi_kind == "constant") v << 1.0, 0.0;
      else v << complexd(xb, xp - p0), 0.0;
      return v;
    });
    const double res = inplane_operator_residual(field, reconstruct_state(field, psi));
    const double order = level == 0 ? 0.0 : std::log2(prev / res);
    t.add_row({double(n), h, res, order});
    prev = res;
  }
  return t;
}

inline ResultTable run_quantization(const RunConfig& cfg) {
  FieldConfig field;
  field.flux_phi = cfg.num("flux_phi");
  field.l0 = cfg.num("l0");
  const int n_max = static_cast<int>(cfg.num("n_max"));

  ResultTable t;
  t.columns = {{"n", "1", "quantization index"},
               {"x_perp", "length", "quantized transverse coordinate"},
               {"residual", "1", "quantization-condition residual"},
               {"hall_current", "e/length", "surface current for N = n at this coordinate"}};
  t.metadata.emplace_back("scenario", "quantization");
  for (const QuantizationRoot& r : quantize_positions(field, n_max)) {
    t.add_row({double(r.n), r.x_perp, r.residual,
               r.n == 0 ? 0.0 : hall_current(r.n, r.x_perp)});
    if (r.residual > 1e-12)
      throw PhysicsViolationError("quantization: root residual above tolerance");
  }
  return t;
}

inline ResultTable run_ring_sweep(const RunConfig& cfg) {
  RingParams p;
  p.rho = cfg.num("rho");
  p.m_eff = cfg.num_or("m_eff", 0.5);
  p.theta = cfg.num("theta");
  p.b_pl = cfg.num("b_pl");
  p.charge_e = cfg.num_or("charge_e", 1.0);
  p.hbar = cfg.num_or("hbar", 1.0);
  const double asym = cfg.num_or("debug_junction_asymmetry", 0.0);

  const std::string vary = cfg.strings.at("vary");
  const int count = static_cast<int>(cfg.num("count"));
  const bool comb = cfg.num_or("comb", vary == "energy" ? 1.0 : 0.0) != 0.0;
  std::vector<double> values;
  if (vary == "energy" && comb) {
    values = resonance_comb_energies(p, count);
  } else {
    const double start = cfg.num_or("start", vary == "energy" ? 0.5 : 0.0);
    const double stop = cfg.num_or("stop", vary == "energy" ? 10.0 : 1.0);
    for (int i = 0; i < count; ++i)
      values.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  }
  const double fixed_energy = cfg.num_or("energy", p.energy_scale());

  ResultTable t;
  t.columns = {{"value", vary == "energy" ? "energy" : (vary == "b_pl" ? "field" : "1/length"),
                "swept quantity: " + vary},
               {"energy", "energy", "lead energy"},
               {"xi", "1/length", "theta - 4 e B_pl"},
               {"phi_t", "1", "sqrt(1 + xi^2 rho^2) - 1"},
               {"t_up_up", "1", "S-matrix transmission, filter basis"},
               {"t_down_down", "1", "S-matrix transmission, filter basis"},
               {"t_off_diagonal", "1", "filter-basis spin mixing"},
               {"t_analytic", "1", "interference factor |1+e^{2 pi i phi_T}|^2 / 4"},
               {"t_norm_up", "1", "transmission over the junction envelope"},
               {"t_norm_down", "1", "transmission over the junction envelope"},
               {"envelope", "1", "free-ring transmission at this energy"},
               {"agreement_ratio", "1", "diagonal transmission / analytic factor"},
               {"unitarity_defect", "1", "max |S^dag S - 1|"}};
  t.metadata.emplace_back("scenario", "ring-sweep");
  t.metadata.emplace_back("vary", vary);
  t.metadata.emplace_back("seed", std::to_string(cfg.seed));

  const int n = static_cast<int>(values.size());
  std::vector<std::vector<double>> rows(n);
  parallel_for_indexed(n, cfg.jobs, [&](int i) {
    RingParams q = p;
    double energy = fixed_energy;
    if (vary == "energy") energy = values[i];
    else if (vary == "b_pl") q.b_pl = values[i];
    else q.theta = values[i];
    const SMatrix s = s_matrix(q, energy, asym);
    const TransmissionSet raw = transmissions(s);
    const TransmissionSet an = transmissions_analytic(s.ring);
    const double env = junction_envelope(q, energy);
    const double fac = an.t_up_up;
    rows[i] = {values[i],
               energy,
               s.ring.xi,
               s.ring.phi_t,
               raw.t_up_up,
               raw.t_down_down,
               raw.t_up_down + raw.t_down_up,
               fac,
               env > 0 ? raw.t_up_up / env : 0.0,
               env > 0 ? raw.t_down_down / env : 0.0,
               env,
               fac > 1e-12 ? 0.5 * (raw.t_up_up + raw.t_down_down) / fac : 0.0,
               s.unitarity_defect()};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  for (const auto& r : t.rows)
    if (r.back() > 1e-10)
      throw PhysicsViolationError("ring-sweep: S-matrix unitarity breached");
  return t;
}

inline ResultTable run_filter_design(const RunConfig& cfg) {
  const double rho = cfg.num("rho");
  const int n_max = static_cast<int>(cfg.num("n_max"));
  const double theta = cfg.num_or("theta", 1.0);
  const double charge_e = cfg.num_or("charge_e", 1.0);

  ResultTable t;
  t.columns = {{"n", "1", "destructive-interference index"},
               {"xi_rho_exact", "1", "exact root of 2 pi phi_T = (2n+1) pi"},
               {"xi_exact", "1/length", "coupling at the exact root"},
               {"phi_t_exact", "1", "total phase at the exact root"},
               {"xi_rho_small_radius", "1", "small-radius shortcut sqrt(n + 3/2)"},
               {"phi_t_small_radius", "1", "total phase the shortcut actually gives"},
               {"phi_t_deviation", "1", "shortcut deviation from n + 1/2"},
               {"b_pl_case_b", "field", "field nulling the coupling at the given theta"}};
  t.metadata.emplace_back("scenario", "filter-design");
  t.metadata.emplace_back("theta", detail::shortest_double(theta));
  const double b_star = theta / (4.0 * charge_e);
  for (const CaseARoot& r : filter_case_a_roots(rho, n_max))
    t.add_row({double(r.n), r.xi_rho_exact, r.xi_exact, r.phi_t_exact, r.xi_rho_small_radius,
               r.phi_t_small_radius, r.phi_t_deviation, b_star});
  return t;
}

}  // namespace detail

inline ResultTable run_scenario(const RunConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::ac_theorem: return detail::run_ac_theorem(cfg);
    case Scenario::gauge_removal: return detail::run_gauge_removal(cfg);
    case Scenario::quantization: return detail::run_quantization(cfg);
    case Scenario::ring_sweep: return detail::run_ring_sweep(cfg);
    case Scenario::filter_design: return detail::run_filter_design(cfg);
  }
  throw std::logic_error("run_scenario: unreachable");
}

inline std::string emit_table(const ResultTable& t, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(t) : to_json(t);
}

}  // namespace indirac
