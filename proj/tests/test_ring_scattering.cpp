#include <catch2/catch.hpp>

#include "inplane_dirac/ring_scattering.hpp"

#include <random>

using namespace indirac;

namespace {

RingParams unit_ring() {
  RingParams p;
  p.rho = 1.0;
  p.m_eff = 0.5;  // energy scale hbar^2 / (2 m rho^2) = 1
  return p;
}

}  // namespace

TEST_CASE("loop holonomy has the filter eigenbasis and phase eigenvalues") {
  RingParams p = unit_ring();
  p.theta = 1.37;
  const DerivedRing d = derive(p);
  const SpinOperator m = loop_holonomy(d);
  const auto [up, dn] = u_phase_eigenvectors(d);
  const complexd lam_up = std::exp(complexd(0, 2.0 * M_PI * d.phi_t));
  CHECK((m * up - lam_up * up).norm() <= 1e-13);
  CHECK((m * dn - std::conj(lam_up) * dn).norm() <= 1e-13);
}

TEST_CASE("decoupled ring reproduces the closed-form transmission") {
  // hand-derived for equal arms with three-way junctions:
  // T(k_phi) = 16 / (16 + 9 sin^2(pi k_phi))
  const RingParams p = unit_ring();
  for (double k_phi : {0.17, 0.55, 1.31, 2.72, 3.9}) {
    const SMatrix s = s_matrix(p, k_phi * k_phi);
    const auto t = transmissions(s);
    const double oracle = 16.0 / (16.0 + 9.0 * std::pow(std::sin(M_PI * k_phi), 2));
    CHECK(t.t_up_up == Approx(oracle).epsilon(1e-12));
    CHECK(t.t_down_down == Approx(oracle).epsilon(1e-12));
    CHECK(s.unitarity_defect() <= 1e-12);
    CHECK(s.condition_number >= 1.0);
    CHECK_FALSE(s.near_singular);
  }
  CHECK_THROWS_AS(s_matrix(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(s_matrix(p, -1.0), std::domain_error);
}

TEST_CASE("unitarity, probability sums and spin decoupling at random points") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> ue(0.05, 30.0), ux(-4.0, 4.0);
  for (int it = 0; it < 100; ++it) {
    RingParams p = unit_ring();
    p.theta = ux(rng);
    const double energy = ue(rng);
    const SMatrix s = s_matrix(p, energy);
    CHECK(s.unitarity_defect() <= 1e-10);
    for (double col : channel_probability_sums(s)) CHECK(col == Approx(1.0).margin(1e-10));
    const auto t = transmissions(s);
    CHECK(t.t_up_down <= 1e-10);
    CHECK(t.t_down_up <= 1e-10);
    for (double v : t.as_array()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("sigma_z basis mixes spins where the filter basis does not") {
  RingParams p = unit_ring();
  p.theta = 1.8;
  const SMatrix s = s_matrix(p, 1.37);
  const auto raw = sigma_z_basis_transmissions(s);
  CHECK(raw[1] + raw[2] > 1e-3);  // off-diagonal in sigma_z
  const auto t = transmissions(s);
  CHECK(t.t_up_down + t.t_down_up <= 1e-10);
}

TEST_CASE("per-point proportionality to the interference factor") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> ue(0.05, 20.0), ux(-3.0, 3.0);
  for (int it = 0; it < 100; ++it) {
    RingParams p = unit_ring();
    p.theta = ux(rng);
    const SMatrix s = s_matrix(p, ue(rng));
    const auto t = transmissions(s);
    const auto a = transmissions_analytic(s.ring);
    if (a.t_up_up < 1e-12) {
      CHECK(t.t_up_up <= 1e-10);
      CHECK(t.t_down_down <= 1e-10);
    } else {
      const double ru = t.t_up_up / a.t_up_up;
      const double rd = t.t_down_down / a.t_down_down;
      CHECK(std::abs(ru - rd) <= 1e-8 * std::max(1.0, std::abs(ru)));
    }
  }
}

TEST_CASE("destructive filter condition kills every channel") {
  const auto roots = filter_case_a_roots(1.0, 3);
  for (const auto& r : roots) {
    RingParams p = unit_ring();
    p.theta = r.xi_exact;
    const auto analytic = transmissions_analytic(derive(p));
    for (double v : analytic.as_array()) CHECK(v <= 1e-20);
    for (double energy : {0.4, 1.7, 9.3}) {
      const auto t = transmissions(s_matrix(p, energy));
      for (double v : t.as_array()) CHECK(v <= 1e-10);
    }
  }
}

TEST_CASE("zero coupling: transmissions constant across the resonance comb") {
  RingParams p = unit_ring();
  p.theta = 0.8;
  p.b_pl = 0.2;  // xi = 0
  REQUIRE(derive(p).phi_t == 0.0);
  const auto energies = resonance_comb_energies(p, 50);
  double lo = 1e300, hi = -1e300;
  for (double e : energies) {
    const auto t = transmissions(s_matrix(p, e));
    lo = std::min({lo, t.t_up_up, t.t_down_down});
    hi = std::max({hi, t.t_up_up, t.t_down_down});
  }
  CHECK(hi - lo <= 1e-10);
}

TEST_CASE("interference factors") {
  DerivedRing d;
  d.phi_t = 0.0;
  for (double v : transmissions_analytic(d).as_array()) CHECK(v == Approx(1.0).margin(1e-15));
  d.phi_t = 0.5;
  for (double v : transmissions_analytic(d).as_array()) CHECK(v <= 1e-20);
  d.phi_t = 0.25;
  for (double v : transmissions_analytic(d).as_array()) CHECK(v == Approx(0.5).margin(1e-14));
}

TEST_CASE("reciprocity in the filter frames") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> ue(0.1, 12.0), ux(-2.5, 2.5), ub(-0.4, 0.4);
  for (int it = 0; it < 20; ++it) {
    RingParams p = unit_ring();
    p.theta = ux(rng);
    p.b_pl = ub(rng);
    const SMatrix s = s_matrix(p, ue(rng));
    CHECK((s.entries - s.entries.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("junction asymmetry knob breaks unitarity on purpose") {
  const RingParams p = unit_ring();
  const SMatrix s = s_matrix(p, 1.1, 0.05);
  CHECK(s.unitarity_defect() > 1e-3);
}

TEST_CASE("transmission sweep") {
  RingParams p = unit_ring();
  p.theta = 1.0;

  // sweep B_pl through the null coupling: the interference factor peaks only
  // there, and the transmission floor over energy is lifted only there (at
  // fixed energy the raw transmission maximum sits off the null because the
  // junction resonances shift with the coupling)
  std::vector<double> values;
  for (int i = 0; i <= 20; ++i) values.push_back(0.25 * i / 20.0 * 2.0);  // includes 0.25
  const auto pts = transmission_sweep(p, values, SweepVariable::b_pl, 1.9);
  size_t argmax = 0;
  double best = -1.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].analytic.t_up_up > best) { best = pts[i].analytic.t_up_up; argmax = i; }
    CHECK(pts[i].unitarity_defect <= 1e-10);
  }
  CHECK(pts[argmax].ring.xi == Approx(0.0).margin(1e-12));
  CHECK(best == Approx(1.0).margin(1e-12));

  auto floor_over_energies = [&](double b_pl) {
    RingParams q = p;
    q.b_pl = b_pl;
    double lo = 1e300;
    for (int i = 1; i <= 12; ++i) {
      const double k_phi = 0.45 * i;  // crosses the near-integer resonance dips
      const auto t = transmissions(s_matrix(q, k_phi * k_phi));
      lo = std::min(lo, std::min(t.t_up_up, t.t_down_down));
    }
    return lo;
  };
  const double floor_null = floor_over_energies(0.25);
  CHECK(floor_null >= 0.6);  // bounded away from zero over the whole range
  CHECK(floor_over_energies(0.05) < 0.5 * floor_null);
  CHECK(floor_over_energies(0.45) < 0.5 * floor_null);

  // energy sweep on the comb at fixed coupling: agreement ratio is constant
  RingParams q = unit_ring();
  q.theta = 0.9;
  const auto energies = resonance_comb_energies(q, 25);
  const auto ept = transmission_sweep(q, energies, SweepVariable::energy);
  double rlo = 1e300, rhi = -1e300;
  for (const auto& pt : ept) {
    rlo = std::min(rlo, pt.agreement_ratio);
    rhi = std::max(rhi, pt.agreement_ratio);
  }
  CHECK(rhi - rlo <= 1e-8);

  CHECK_THROWS_AS(transmission_sweep(p, {}, SweepVariable::energy), std::invalid_argument);
}
