#pragma once

// Two-lead ring scattering. Sixteen amplitudes (two leads times in/out times
// two spins, plus two arm segments times two directions times two spins) are
// matched with spinor continuity at both junctions and conservation of the
// generalized momentum (Griffith conditions); the resulting 12x12 solve gives
// the 4x4 scattering matrix.
//
// Arm basis functions: Psi_{d,s}(phi) = e^{i(d k_phi + s phi_T) phi} T(phi) chi_s
// with the texture T(phi) = e^{-i beta sigma_phi(phi)/2}. Each is an exact
// eigenstate of the self-adjoint ring operator (-i d/dphi - A(phi))^2 / (2 m rho^2)
// with the Hermitian connection A = phi_T T sigma_z T^dag - i T' T^dag, so the
// covariant derivative acts on Psi_{d,s} as multiplication by i d k_phi and the
// construction conserves current exactly.
//
// Spin frames for reporting: at each junction the local holonomy eigenbasis,
// i.e. the filter eigenvectors at the left junction and their mirror (xi -> -xi)
// at the right junction. In these frames the spin channels decouple.

#include "inplane_dirac/ring.hpp"
#include "inplane_dirac/spin_algebra.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace indirac {

/// Spin texture around the ring, T(phi) = cos(beta/2) I - i sin(beta/2) sigma_phi(phi).
inline SpinOperator ring_texture(double beta, double phi) {
  const complexd i(0, 1);
  const SpinOperator s_phi = std::cos(phi) * sigma_y() - std::sin(phi) * sigma_x();
  return std::cos(0.5 * beta) * SpinOperator::Identity() - i * std::sin(0.5 * beta) * s_phi;
}

/// Transfer of a spinor once around the ring: T(0) diag(e^{2pi i phi_T}, e^{-2pi i phi_T}) T(0)^dag.
/// Its eigenvectors are the filter basis and its eigenvalues e^{+-2 pi i phi_T}.
inline SpinOperator loop_holonomy(const DerivedRing& d) {
  const SpinOperator t0 = ring_texture(d.beta, 0.0);
  Eigen::Matrix2cd phases = Eigen::Matrix2cd::Zero();
  phases(0, 0) = std::exp(complexd(0.0, 2.0 * M_PI * d.phi_t));
  phases(1, 1) = std::exp(complexd(0.0, -2.0 * M_PI * d.phi_t));
  return t0 * phases * t0.adjoint();
}

struct SMatrix {
  Eigen::Matrix4cd entries;      // filter frames: (left out up~, down~, right out up~, down~)
  Eigen::Matrix4cd raw_entries;  // same map in the plain sigma_z lead basis
  double condition_number = 0.0;  // of the junction system
  bool near_singular = false;
  double k_phi = 0.0;
  DerivedRing ring;

  double unitarity_defect() const {
    return (entries.adjoint() * entries - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
  }
};

/// Transmission probabilities without the filter-frame rotation, for comparing
/// against the decoupled filter-basis block.
inline std::array<double, 4> sigma_z_basis_transmissions(const SMatrix& s) {
  return {std::norm(s.raw_entries(2, 0)), std::norm(s.raw_entries(2, 1)),
          std::norm(s.raw_entries(3, 0)), std::norm(s.raw_entries(3, 1))};
}

struct TransmissionSet {
  double t_up_up = 0.0;      // up~ in -> up~ out
  double t_up_down = 0.0;    // down~ in -> up~ out
  double t_down_up = 0.0;
  double t_down_down = 0.0;

  std::array<double, 4> as_array() const { return {t_up_up, t_up_down, t_down_up, t_down_down}; }
};

namespace detail {

struct JunctionFrames {
  Eigen::Matrix2cd left;   // columns: filter eigenvectors at xi
  Eigen::Matrix2cd right;  // columns: mirrored eigenvectors (xi -> -xi)
};

inline JunctionFrames junction_frames(const DerivedRing& d) {
  JunctionFrames f;
  const auto [lu, ld] = u_phase_eigenvectors(d);
  f.left.col(0) = lu;
  f.left.col(1) = ld;
  DerivedRing mirror = d;
  mirror.xi = -d.xi;
  mirror.beta = -d.beta;
  const auto [ru, rd] = u_phase_eigenvectors(mirror);
  f.right.col(0) = ru;
  f.right.col(1) = rd;
  return f;
}

}  // namespace detail

/// Full junction solve at energy E. debug_junction_asymmetry deliberately
/// detunes one continuity row; nonzero values break unitarity and exist so the
/// physics-violation reporting path can be exercised.
inline SMatrix s_matrix(const RingParams& p, double energy, double debug_junction_asymmetry = 0.0) {
  p.validate();
  if (!(energy > 0.0)) throw std::domain_error("s_matrix: energy must be > 0");
  const DerivedRing d = derive(p);
  const double k = std::sqrt(2.0 * p.m_eff * energy) / p.hbar;
  const double k_phi = k * p.rho;
  const complexd i(0, 1);

  // arm basis: order (d=+1,s=+1), (+1,-1), (-1,+1), (-1,-1)
  const std::array<int, 4> dir = {+1, +1, -1, -1};
  const std::array<int, 4> spn = {+1, -1, +1, -1};
  const Eigen::Vector2cd chi[2] = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};

  auto basis_at = [&](int b, double phi) -> Eigen::Vector2cd {
    const complexd ph = std::exp(i * (dir[b] * k_phi + spn[b] * d.phi_t) * phi);
    return ph * (ring_texture(d.beta, phi) * chi[spn[b] > 0 ? 0 : 1]);
  };

  // unknown layout: a_out(0,1), b_out(2,3), c_up(4..7), c_low(8..11)
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(12, 12);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(12, 4);  // columns: a_in_up, a_in_dn, b_in_up, b_in_dn

  int row = 0;
  // continuity at the left junction: lead = upper arm at phi = 0, lead = lower arm at phi = 2 pi
  for (double phi : {0.0, 2.0 * M_PI}) {
    const bool upper = (phi == 0.0);
    for (int comp = 0; comp < 2; ++comp, ++row) {
      m(row, comp) = 1.0;  // a_out
      for (int b = 0; b < 4; ++b)
        m(row, (upper ? 4 : 8) + b) = -basis_at(b, phi)(comp) * (1.0 + debug_junction_asymmetry);
      rhs(row, comp) = -1.0;  // a_in component
    }
  }
  // continuity at the right junction, phi = pi, both arms
  for (int arm = 0; arm < 2; ++arm) {
    for (int comp = 0; comp < 2; ++comp, ++row) {
      m(row, 2 + comp) = 1.0;  // b_out
      for (int b = 0; b < 4; ++b) m(row, (arm == 0 ? 4 : 8) + b) = -basis_at(b, M_PI)(comp);
      rhs(row, 2 + comp) = -1.0;
    }
  }
  // generalized-momentum conservation, divided through by i k:
  // left: (a_out - a_in) + sum_up d c Psi(0) - sum_low d c Psi(2 pi) = 0
  for (int comp = 0; comp < 2; ++comp, ++row) {
    m(row, comp) = 1.0;
    for (int b = 0; b < 4; ++b) {
      m(row, 4 + b) = double(dir[b]) * basis_at(b, 0.0)(comp);
      m(row, 8 + b) = -double(dir[b]) * basis_at(b, 2.0 * M_PI)(comp);
    }
    rhs(row, comp) = 1.0;
  }
  // right: (b_out - b_in) - sum_up d c Psi(pi) + sum_low d c Psi(pi) = 0
  for (int comp = 0; comp < 2; ++comp, ++row) {
    m(row, 2 + comp) = 1.0;
    for (int b = 0; b < 4; ++b) {
      m(row, 4 + b) = -double(dir[b]) * basis_at(b, M_PI)(comp);
      m(row, 8 + b) = double(dir[b]) * basis_at(b, M_PI)(comp);
    }
    rhs(row, 2 + comp) = 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SMatrix out;
  out.k_phi = k_phi;
  out.ring = d;
  out.condition_number = svd.singularValues()(0) / svd.singularValues()(11);
  out.near_singular = !(svd.singularValues()(11) > 1e-13 * svd.singularValues()(0));
  const Eigen::MatrixXcd sol = svd.solve(rhs);

  // raw S in the sigma_z lead basis, then per-junction filter frames
  out.raw_entries = sol.topRows<4>();
  const detail::JunctionFrames f = detail::junction_frames(d);
  Eigen::Matrix4cd q = Eigen::Matrix4cd::Zero();
  q.block<2, 2>(0, 0) = f.left;
  q.block<2, 2>(2, 2) = f.right;
  out.entries = q.adjoint() * out.raw_entries * q;
  return out;
}

/// Transmission block |right out <- left in|^2 in the filter frames.
inline TransmissionSet transmissions(const SMatrix& s) {
  TransmissionSet t;
  t.t_up_up = std::norm(s.entries(2, 0));
  t.t_up_down = std::norm(s.entries(2, 1));
  t.t_down_up = std::norm(s.entries(3, 0));
  t.t_down_down = std::norm(s.entries(3, 1));
  return t;
}

/// Per-incoming-channel probability sums over all outgoing channels; each is 1
/// for a unitary S.
inline std::array<double, 4> channel_probability_sums(const SMatrix& s) {
  std::array<double, 4> sums{};
  for (int cin = 0; cin < 4; ++cin) {
    double acc = 0;
    for (int cout = 0; cout < 4; ++cout) acc += std::norm(s.entries(cout, cin));
    sums[cin] = acc;
  }
  return sums;
}

/// Interference factors |1 + e^{+-2 pi i phi_T}|^2 per channel, normalized so
/// the maximum over phi_T equals 1. The up-row channels carry the + branch and
/// the down-row channels the - branch; the moduli coincide.
inline TransmissionSet transmissions_analytic(const DerivedRing& d) {
  const auto factor = [&](int branch) {
    const complexd z = 1.0 + std::exp(complexd(0.0, branch * 2.0 * M_PI * d.phi_t));
    return std::norm(z) / 4.0;
  };
  TransmissionSet t;
  t.t_up_up = factor(+1);
  t.t_up_down = factor(+1);
  t.t_down_up = factor(-1);
  t.t_down_down = factor(-1);
  return t;
}

/// Transmission of the decoupled ring (xi = 0) at the same energy: the junction
/// envelope against which filter statements are normalized.
inline double junction_envelope(const RingParams& p, double energy) {
  RingParams free_ring = p;
  free_ring.theta = 0.0;
  free_ring.b_pl = 0.0;
  const SMatrix s = s_matrix(free_ring, energy);
  return transmissions(s).t_up_up;
}

/// Energies where the junction envelope is provably energy-independent:
/// k_phi = offset + n, n = 0..count-1 (sin^2(pi k_phi) is constant there).
inline std::vector<double> resonance_comb_energies(const RingParams& p, int count,
                                                   double offset = 0.25) {
  p.validate();
  if (count < 1) throw std::domain_error("resonance_comb_energies: count must be >= 1");
  std::vector<double> e;
  e.reserve(count);
  for (int n = 0; n < count; ++n) {
    const double k_phi = offset + n;
    e.push_back(p.energy_scale() * k_phi * k_phi);
  }
  return e;
}

enum class SweepVariable { b_pl, theta, energy };

struct SweepPoint {
  double value = 0.0;   // the varied quantity
  double energy = 0.0;
  DerivedRing ring;
  TransmissionSet raw;
  TransmissionSet analytic;
  double envelope = 0.0;          // free-ring transmission at this energy
  double agreement_ratio = 0.0;   // mean diagonal raw T / analytic factor
  double unitarity_defect = 0.0;
};

/// Sweep over energies or couplings; per point the raw S-matrix transmissions,
/// the analytic interference factors and their agreement ratio.
inline std::vector<SweepPoint> transmission_sweep(const RingParams& base,
                                                  const std::vector<double>& values,
                                                  SweepVariable vary, double fixed_energy = 1.0) {
  if (values.empty()) throw std::invalid_argument("transmission_sweep: empty sweep");
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (double v : values) {
    RingParams p = base;
    double energy = fixed_energy;
    switch (vary) {
      case SweepVariable::b_pl: p.b_pl = v; break;
      case SweepVariable::theta: p.theta = v; break;
      case SweepVariable::energy: energy = v; break;
    }
    SweepPoint pt;
    pt.value = v;
    pt.energy = energy;
    const SMatrix s = s_matrix(p, energy);
    pt.ring = s.ring;
    pt.raw = transmissions(s);
    pt.analytic = transmissions_analytic(s.ring);
    pt.envelope = junction_envelope(p, energy);
    pt.unitarity_defect = s.unitarity_defect();
    const double fac = pt.analytic.t_up_up;
    pt.agreement_ratio = fac > 1e-12 ? 0.5 * (pt.raw.t_up_up + pt.raw.t_down_down) / fac : 0.0;
    out.push_back(pt);
  }
  return out;
}

}  // namespace indirac
