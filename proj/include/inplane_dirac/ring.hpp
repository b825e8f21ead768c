#pragma once

// Quantum-ring spin filter under an in-plane field: derived coupling
// parameters, angular-basis Hamiltonians, the loop phase factor and its
// eigenvectors, and the two filter conditions.

#include "inplane_dirac/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace indirac {

struct RingParams {
  double rho = 1.0;    // ring radius
  double m_eff = 0.5;  // effective mass
  double theta = 0.0;  // Rashba coupling, inverse length (2 m* alpha / hbar)
  double b_pl = 0.0;   // in-plane field magnitude
  double charge_e = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(rho > 0.0)) throw std::domain_error("RingParams: rho must be > 0");
    if (!(m_eff > 0.0)) throw std::domain_error("RingParams: m_eff must be > 0");
    if (!std::isfinite(theta) || !std::isfinite(b_pl) || !std::isfinite(charge_e) ||
        !std::isfinite(hbar))
      throw std::domain_error("RingParams: non-finite field");
  }

  double energy_scale() const { return hbar * hbar / (2.0 * m_eff * rho * rho); }
};

struct DerivedRing {
  double xi = 0.0;     // theta - 4 e B_pl
  double beta = 0.0;   // arctan xi
  double phi_t = 0.0;  // sqrt(1 + xi^2 rho^2) - 1
  double rho = 1.0;
};

inline DerivedRing derive(const RingParams& p) {
  p.validate();
  DerivedRing d;
  d.xi = p.theta - 4.0 * p.charge_e * p.b_pl;
  d.beta = std::atan(d.xi);
  d.phi_t = std::sqrt(1.0 + d.xi * d.xi * p.rho * p.rho) - 1.0;
  d.rho = p.rho;
  return d;
}

inline SpinOperator rot_y(double angle) {
  SpinOperator m;
  m << std::cos(0.5 * angle), -std::sin(0.5 * angle), std::sin(0.5 * angle),
      std::cos(0.5 * angle);
  return m;
}

/// Phase factor accumulated around the ring: scalar e^{branch 2 pi i phi_T}
/// times the spin rotation e^{-i beta sigma_y / 2}.
inline SpinOperator u_phase(const DerivedRing& d, int branch = +1) {
  if (branch != 1 && branch != -1) throw std::domain_error("u_phase: branch must be +-1");
  const complexd scalar = std::exp(complexd(0.0, branch * 2.0 * M_PI * d.phi_t));
  return scalar * rot_y(d.beta);
}

/// Spin-filter eigenbasis: the normalized vectors
///   ((sqrt(xi^2+1)+1)/2, xi/2)  and  (xi/2, -(sqrt(xi^2+1)+1)/2).
/// Their component ratio is tan(beta/2); at xi = 0 they reduce to the
/// sigma_z eigenvectors (1,0) and (0,-1).
inline std::pair<Spinor2, Spinor2> u_phase_eigenvectors(const DerivedRing& d) {
  const double xi = d.xi;
  const double a = 0.5 * (std::sqrt(xi * xi + 1.0) + 1.0);
  Spinor2 up, down;
  up << a, 0.5 * xi;
  down << 0.5 * xi, -a;
  up.normalize();
  down.normalize();
  return {up, down};
}

/// One propagating ring state at a given energy: momentum direction, spin
/// label in the filter basis, and the dimensionless angular wavenumber.
struct RingState {
  int momentum_sign = +1;
  int spin_sign = +1;
  double k_phi = 0.0;
  double energy = 0.0;
};

inline RingState ring_state(const RingParams& p, double energy, int momentum_sign, int spin_sign) {
  if (momentum_sign != 1 && momentum_sign != -1)
    throw std::domain_error("ring_state: momentum sign must be +-1");
  if (spin_sign != 1 && spin_sign != -1)
    throw std::domain_error("ring_state: spin sign must be +-1");
  if (!(energy > 0.0)) throw std::domain_error("ring_state: energy must be > 0");
  RingState s;
  s.momentum_sign = momentum_sign;
  s.spin_sign = spin_sign;
  s.energy = energy;
  s.k_phi = std::sqrt(2.0 * p.m_eff * energy) / p.hbar * p.rho;
  return s;
}

struct CaseARoot {
  int n = 0;
  double xi_rho_exact = 0.0;        // sqrt((n + 3/2)^2 - 1)
  double xi_exact = 0.0;            // xi_rho_exact / rho
  double phi_t_exact = 0.0;         // n + 1/2 by construction
  double xi_rho_small_radius = 0.0; // sqrt(n + 3/2), the small-radius shortcut
  double phi_t_small_radius = 0.0;
  double phi_t_deviation = 0.0;     // |phi_t_small_radius - (n + 1/2)|
};

/// Exact couplings where the total phase hits the destructive condition
/// 2 pi phi_T = (2n+1) pi, i.e. phi_T = n + 1/2. The small-radius shortcut
/// values sqrt(n + 3/2) are carried along with their phi_T deviation; they are
/// documentation only and never used downstream.
inline std::vector<CaseARoot> filter_case_a_roots(double rho, int n_max) {
  if (!(rho > 0.0)) throw std::domain_error("filter_case_a_roots: rho must be > 0");
  if (n_max < 0) throw std::domain_error("filter_case_a_roots: n_max must be >= 0");
  std::vector<CaseARoot> out;
  out.reserve(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    CaseARoot r;
    r.n = n;
    const double target = n + 1.5;
    r.xi_rho_exact = std::sqrt(target * target - 1.0);
    r.xi_exact = r.xi_rho_exact / rho;
    r.phi_t_exact = std::sqrt(1.0 + r.xi_rho_exact * r.xi_rho_exact) - 1.0;
    r.xi_rho_small_radius = std::sqrt(target);
    r.phi_t_small_radius = std::sqrt(1.0 + target) - 1.0;
    r.phi_t_deviation = std::abs(r.phi_t_small_radius - (n + 0.5));
    out.push_back(r);
  }
  return out;
}

/// |theta - 4 e B_pl|; zero exactly when the total phase vanishes identically.
inline double filter_case_b_condition(const RingParams& p) {
  p.validate();
  return std::abs(p.theta - 4.0 * p.charge_e * p.b_pl);
}

/// Dense angular-momentum-basis Hamiltonian for the ring. Basis ordering:
/// (m, spin) with m = -m_cut .. m_cut, spin index 0 = up. sigma_rho couples
/// (m, up) -> (m+1, down) and (m, down) -> (m-1, up).
class AngularRingOperator {
 public:
  AngularRingOperator(int m_cut, double scale) : m_cut_(m_cut), scale_(scale) {
    if (2 * m_cut + 1 < 8)
      throw std::domain_error("AngularRingOperator: need at least 8 angular modes");
    const int n = dim();
    momentum_ = Eigen::MatrixXcd::Zero(n, n);
  }

  int dim() const { return 2 * (2 * m_cut_ + 1); }
  int m_cut() const { return m_cut_; }
  int index(int m, int spin) const { return 2 * (m + m_cut_) + spin; }

  /// (-i d/dphi - shift - c_rho * sigma_rho(phi)) in the angular basis.
  void build(double shift, double c_rho) {
    momentum_.setZero();
    for (int m = -m_cut_; m <= m_cut_; ++m) {
      momentum_(index(m, 0), index(m, 0)) = m - shift;
      momentum_(index(m, 1), index(m, 1)) = m - shift;
      if (m + 1 <= m_cut_) momentum_(index(m + 1, 1), index(m, 0)) = -c_rho;
      if (m - 1 >= -m_cut_) momentum_(index(m - 1, 0), index(m, 1)) = -c_rho;
    }
  }

  Eigen::MatrixXcd hamiltonian() const { return scale_ * (momentum_.adjoint() * momentum_); }
  const Eigen::MatrixXcd& momentum() const { return momentum_; }

  /// Eigenvalues away from the truncation edge: the lowest `keep` of them.
  std::vector<double> interior_eigenvalues(int keep) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian(), Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + dim());
    if (keep < static_cast<int>(ev.size())) ev.resize(keep);
    return ev;
  }

 private:
  int m_cut_;
  double scale_;
  Eigen::MatrixXcd momentum_;
};

/// Ring Hamiltonian with the in-plane field absorbed into xi.
inline AngularRingOperator hamiltonian_inplane(const RingParams& p, int m_cut = 32) {
  const DerivedRing d = derive(p);
  AngularRingOperator op(m_cut, p.energy_scale());
  op.build(0.0, 0.5 * d.xi * p.rho);
  return op;
}

/// Ring Hamiltonian for a perpendicular field B_z: the flux phi_B shifts the
/// angular momentum uniformly while the sigma_rho coefficient stays theta*rho/2
/// for every B_z. Used for the screening comparison only.
inline AngularRingOperator hamiltonian_perpendicular(const RingParams& p, double b_z,
                                                     int m_cut = 32) {
  p.validate();
  const double h_planck = 2.0 * M_PI * p.hbar;
  const double phi_b = p.charge_e * M_PI * p.rho * p.rho * b_z / h_planck;
  AngularRingOperator op(m_cut, p.energy_scale());
  op.build(phi_b, 0.5 * p.theta * p.rho);
  return op;
}

/// sigma_rho coefficient entering each Hamiltonian; the screening contrast is
/// that the in-plane one sweeps through zero with B_pl while the perpendicular
/// one never depends on B_z.
inline double sigma_rho_coefficient_inplane(const RingParams& p) {
  return 0.5 * derive(p).xi * p.rho;
}
inline double sigma_rho_coefficient_perpendicular(const RingParams& p, double /*b_z*/) {
  p.validate();
  return 0.5 * p.theta * p.rho;
}

/// Closed-ring analytic spectrum: (hbar^2 / 2 m rho^2) (m + s phi_T / 2)^2,
/// the branch offsets sitting at +- phi_T / 2.
inline std::vector<double> analytic_ring_spectrum(const RingParams& p, int m_cut) {
  const DerivedRing d = derive(p);
  std::vector<double> ev;
  for (int m = -m_cut; m <= m_cut; ++m)
    for (int s : {+1, -1}) {
      const double q = m + 0.5 * s * d.phi_t;
      ev.push_back(p.energy_scale() * q * q);
    }
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace indirac
