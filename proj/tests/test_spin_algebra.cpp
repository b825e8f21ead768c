#include <catch2/catch.hpp>

#include "inplane_dirac/spin_algebra.hpp"

#include <random>

using namespace indirac;

namespace {

bool close(const SpinOperator& a, const SpinOperator& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

void check_pauli_like(const SpinOperator& m, double tol = 1e-15) {
  CHECK(close(m, m.adjoint(), tol));                                 // Hermitian
  CHECK(close(m * m.adjoint(), SpinOperator::Identity(), tol));      // unitary
  CHECK(std::abs(m.trace()) <= tol);                                 // traceless
  CHECK(close(m * m, SpinOperator::Identity(), tol));                // squares to 1
}

}  // namespace

TEST_CASE("inplane basis at axis angles") {
  const auto b0 = make_inplane_basis(0.0);
  CHECK(close(b0.sigma_b, sigma_x(), 1e-15));
  CHECK(close(b0.sigma_perp, sigma_y(), 1e-15));
  const auto b90 = make_inplane_basis(M_PI / 2);
  CHECK(close(b90.sigma_b, sigma_y(), 1e-15));
}

TEST_CASE("inplane basis algebra sigma_b sigma_perp = i sigma_z") {
  const complexd i(0, 1);
  for (double omega : {0.0, M_PI / 3, 1.234, -2.0}) {
    const auto b = make_inplane_basis(omega);
    check_pauli_like(b.sigma_b);
    check_pauli_like(b.sigma_perp);
    CHECK(close(b.sigma_b * b.sigma_perp, i * sigma_z(), 1e-15));
    CHECK((b.sigma_b * b.sigma_perp + b.sigma_perp * b.sigma_b).cwiseAbs().maxCoeff() <= 1e-15);
  }
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int it = 0; it < 100; ++it) {
    const auto b = make_inplane_basis(u(rng));
    CHECK(close(b.sigma_b * b.sigma_perp, complexd(0, 1) * sigma_z(), 1e-15));
  }
  CHECK_THROWS_AS(make_inplane_basis(std::nan("")), std::domain_error);
}

TEST_CASE("cylindrical basis") {
  const auto b0 = make_cyl_basis(0.0, 0.7);
  CHECK(close(b0.sigma_rho, sigma_x(), 1e-15));
  CHECK(close(b0.sigma_phi, sigma_y(), 1e-15));
  const auto b90 = make_cyl_basis(M_PI / 2, 0.7);
  CHECK(close(b90.sigma_rho, sigma_y(), 1e-15));
  CHECK(close(b90.sigma_phi, -sigma_x(), 1e-15));

  std::mt19937 rng(314);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  const complexd i(0, 1);
  for (int it = 0; it < 100; ++it) {
    const double phi = u(rng), omega = u(rng);
    const auto b = make_cyl_basis(phi, omega);
    check_pauli_like(b.sigma_rho);
    check_pauli_like(b.sigma_phi);
    check_pauli_like(b.sigma_b, 1e-14);
    check_pauli_like(b.sigma_perp, 1e-14);
    CHECK(close(b.sigma_rho * b.sigma_phi, i * sigma_z(), 1e-15));
    // the field-adapted pair agrees with the Cartesian construction
    const auto cart = make_inplane_basis(omega);
    CHECK(close(b.sigma_b, cart.sigma_b, 1e-14));
    CHECK(close(b.sigma_perp, cart.sigma_perp, 1e-14));
  }
}

TEST_CASE("charge conjugation action") {
  const ChargeConjugation c;
  Spinor2 e1, res;
  e1 << 1, 0;
  res = apply_charge_conjugation(c, e1);
  CHECK(std::abs(res(0)) <= 1e-16);
  CHECK(std::abs(res(1) - complexd(1, 0)) <= 1e-16);

  Spinor2 doublet;
  const complexd a(0.3, -1.7);
  doublet << a, std::conj(a);
  res = apply_charge_conjugation(c, doublet);
  CHECK((res - doublet).norm() <= 1e-16);

  Spinor2 im;
  im << complexd(0, 1), 0;
  res = apply_charge_conjugation(c, im);
  CHECK(std::abs(res(0)) <= 1e-16);
  CHECK(std::abs(res(1) - complexd(0, -1)) <= 1e-16);
}

TEST_CASE("charge conjugation is antilinear and involutive") {
  const ChargeConjugation c;
  std::mt19937 rng(777);
  std::normal_distribution<double> g;
  for (int it = 0; it < 1000; ++it) {
    Spinor2 psi;
    psi << complexd(g(rng), g(rng)), complexd(g(rng), g(rng));
    const complexd a(g(rng), g(rng));
    const Spinor2 lhs = apply_charge_conjugation(c, Spinor2(a * psi));
    const Spinor2 rhs = std::conj(a) * apply_charge_conjugation(c, psi);
    CHECK((lhs - rhs).norm() <= 1e-14 * (1.0 + psi.norm() * std::abs(a)));
    const Spinor2 twice = apply_charge_conjugation(c, apply_charge_conjugation(c, psi));
    CHECK((twice - psi).norm() <= 1e-14 * (1.0 + psi.norm()));
  }
}

TEST_CASE("majorana check") {
  Spinor2 psi;
  psi << 1, 1;
  auto r = majorana_check(psi, 1e-12);
  REQUIRE(r.is_majorana);
  CHECK(std::abs(*r.phase_c - complexd(1, 0)) <= 1e-12);

  // doublet u + iv, u - iv
  psi << complexd(0.4, 0.9), complexd(0.4, -0.9);
  r = majorana_check(psi, 1e-12);
  REQUIRE(r.is_majorana);
  CHECK(std::abs(*r.phase_c - complexd(1, 0)) <= 1e-12);

  psi << 1, 2;
  r = majorana_check(psi, 1e-12);
  CHECK_FALSE(r.is_majorana);
  CHECK_FALSE(r.phase_c.has_value());

  psi << 0, 0;
  CHECK_THROWS_AS(majorana_check(psi, 1e-12), std::domain_error);
}

TEST_CASE("majorana check is global-phase invariant, c rotates by exp(-2 i gamma)") {
  std::mt19937 rng(99);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int it = 0; it < 200; ++it) {
    const complexd a(g(rng), g(rng));
    Spinor2 psi;
    psi << a, std::conj(a);
    if (psi.norm() < 1e-6) continue;
    const double gamma = u(rng);
    const complexd phase = std::exp(complexd(0, gamma));
    const auto base = majorana_check(psi, 1e-10);
    const auto rot = majorana_check(Spinor2(phase * psi), 1e-10);
    REQUIRE(base.is_majorana);
    REQUIRE(rot.is_majorana);
    const complexd expect = *base.phase_c * std::exp(complexd(0, -2.0 * gamma));
    CHECK(std::abs(*rot.phase_c - expect) <= 1e-10);
  }
}

TEST_CASE("generalized momentum identity") {
  CHECK(generalized_momentum_identity(0.0, 1.3) <= 1e-15);
  CHECK(generalized_momentum_identity(1.0, 0.0) <= 1e-14);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int it = 0; it < 100; ++it)
    worst = std::max(worst, generalized_momentum_identity(u(rng), u(rng)));
  CHECK(worst <= 1e-13);
}
