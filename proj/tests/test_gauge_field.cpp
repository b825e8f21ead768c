#include <catch2/catch.hpp>

#include "inplane_dirac/gauge_field.hpp"
#include "inplane_dirac/lambert_w.hpp"

#include <random>

using namespace indirac;

TEST_CASE("lambert w against the defining equation and a bisection oracle") {
  for (double x : {0.0, 1e-6, 0.1, 0.5, 1.0, M_PI / std::exp(1.0), 10.0, 1e4, 1e8}) {
    const double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-13 * (1.0 + x));
  }
  // bisection oracle on w e^w = x, w in [0, 30]
  auto oracle = [](double x) {
    double lo = 0.0, hi = 30.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid * std::exp(mid) < x) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int it = 0; it < 50; ++it) {
    const double x = u(rng);
    CHECK(std::abs(lambert_w0(x) - oracle(x)) <= 1e-12);
  }
  CHECK_THROWS_AS(lambert_w0(-1.0), std::domain_error);
  // branch point
  CHECK(std::abs(lambert_w0(-std::exp(-1.0)) + 1.0) <= 1e-7);
}

TEST_CASE("gauge scalar profile") {
  FieldConfig cfg;
  cfg.flux_phi = 2.0;
  cfg.l0 = 0.7;

  // x = l0: bracket is -1, so phi = i Phi l0
  const complexd at_l0 = phi_profile(cfg, cfg.l0);
  CHECK(std::abs(at_l0 - complexd(0, cfg.flux_phi * cfg.l0)) <= 1e-14);
  // x = e l0: zero of the bracket
  CHECK(std::abs(phi_profile(cfg, cfg.l0 * std::exp(1.0))) <= 1e-14);

  FieldConfig zero = cfg;
  zero.flux_phi = 0.0;
  CHECK(std::abs(phi_profile(zero, 1.3)) == 0.0);

  CHECK_THROWS_AS(phi_profile(cfg, 0.0), std::domain_error);
}

TEST_CASE("field strength profile and its finite-difference identity") {
  FieldConfig cfg;
  cfg.flux_phi = 1.0;
  cfg.l0 = 1.0;
  CHECK(b_profile(cfg, 2.0) == Approx(0.5).margin(1e-15));
  FieldConfig zero = cfg;
  zero.flux_phi = 0.0;
  CHECK(b_profile(zero, 2.0) == 0.0);
  CHECK_THROWS_AS(b_profile(cfg, -1.0), std::domain_error);

  CHECK(b_profile_fd_residual(cfg, 1.0, 1e-4) <= 1e-6);

  // second-order convergence of the difference check
  const double r3 = b_profile_fd_residual(cfg, 1.5, 1e-3);
  const double r4 = b_profile_fd_residual(cfg, 1.5, 1e-4);
  const double order = std::log10(r3 / r4);
  CHECK(order >= 1.9);
  CHECK(order <= 2.6);
}

TEST_CASE("exponential factor") {
  FieldConfig cfg;
  cfg.flux_phi = 1.0;
  cfg.l0 = 1.0;
  cfg.omega = 0.9;

  // phi vanishes at x = e l0, so the factor is the identity
  CHECK((exp_factor(cfg, std::exp(1.0)) - SpinOperator::Identity()).cwiseAbs().maxCoeff() <= 1e-13);

  FieldConfig zero = cfg;
  zero.flux_phi = 0.0;
  CHECK((exp_factor(zero, 0.4) - SpinOperator::Identity()).cwiseAbs().maxCoeff() <= 1e-15);

  const InplaneBasis b = make_inplane_basis(cfg.omega);
  for (double x : {0.2, 0.9, 2.0, 5.0}) {
    const SpinOperator m = exp_factor(cfg, x);
    CHECK((m * b.sigma_b - b.sigma_b * m).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((m * m.inverse() - SpinOperator::Identity()).cwiseAbs().maxCoeff() <= 1e-13);
  }

  // overflow policy
  FieldConfig big = cfg;
  big.flux_phi = 1e4;
  CHECK_THROWS_AS(exp_factor(big, 1e3), std::overflow_error);
}

TEST_CASE("normalizability of the eigencomponent") {
  FieldConfig cfg;
  cfg.flux_phi = 1.5;
  cfg.l0 = 1.0;
  // with Phi s > 0 the s eigencomponent decreases monotonically as x -> 0+
  double prev = exp_factor_eigencomponent(cfg, 0.9, +1);
  for (double x = 0.8; x > 0.01; x -= 0.05) {
    const double cur = exp_factor_eigencomponent(cfg, x, +1);
    CHECK(cur < prev);
    prev = cur;
  }
  // and decays to zero at large x, where the gauge scalar grows
  CHECK(exp_factor_eigencomponent(cfg, 50.0, +1) <= 1e-30);
  CHECK(exp_factor_eigencomponent(cfg, 50.0, -1) >= 1e30);
}

TEST_CASE("quantization roots") {
  FieldConfig cfg;
  cfg.flux_phi = 1.0;
  cfg.l0 = 1.0;

  const auto roots = quantize_positions(cfg, 50);
  REQUIRE(roots.size() == 51);
  CHECK(roots[0].x_perp == Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(roots[1].x_perp == Approx(std::exp(lambert_w0(M_PI / std::exp(1.0)) + 1.0)).epsilon(1e-13));
  CHECK(roots[1].x_perp == Approx(5.058).epsilon(1e-3));

  // independent bisection oracle on Phi x (ln x - 1) = n pi over a wide bracket
  auto oracle = [&](int n) {
    double lo = std::exp(1.0), hi = 1e4;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (cfg.flux_phi * mid * (std::log(mid / cfg.l0) - 1.0) < n * M_PI) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  for (const auto& r : roots) {
    CHECK(r.residual <= 1e-12);
    CHECK(std::abs(r.x_perp - oracle(r.n)) <= 1e-12 * r.x_perp);
  }
  for (size_t i = 1; i < roots.size(); ++i) CHECK(roots[i].x_perp > roots[i - 1].x_perp);

  FieldConfig zero = cfg;
  zero.flux_phi = 0.0;
  CHECK_THROWS_AS(quantize_positions(zero, 3), std::domain_error);
  FieldConfig neg = cfg;
  neg.flux_phi = -1.0;
  CHECK_THROWS_AS(quantize_positions(neg, 3), std::domain_error);
}

TEST_CASE("hall current") {
  CHECK(hall_current(0, 1.0) == 0.0);
  CHECK(hall_current(1, 2.0 * M_PI) == Approx(1.0).epsilon(1e-15));
  const double x = 0.37;
  CHECK(hall_current(2, x) / hall_current(1, x) == Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(hall_current(1, -1.0), std::domain_error);
}
