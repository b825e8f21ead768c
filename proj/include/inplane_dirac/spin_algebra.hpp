#pragma once

// Rotated, cylindrical and charge-conjugation spin operators for the 2D
// in-plane-field Dirac problem. All operators are 2x2; states are two-spinors.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

namespace indirac {

using complexd = std::complex<double>;
using Spinor2 = Eigen::Vector2cd;
using SpinOperator = Eigen::Matrix2cd;

inline bool finite(const Spinor2& psi) {
  return std::isfinite(psi(0).real()) && std::isfinite(psi(0).imag()) &&
         std::isfinite(psi(1).real()) && std::isfinite(psi(1).imag());
}

inline SpinOperator sigma_x() {
  SpinOperator m;
  m << 0, 1, 1, 0;
  return m;
}

inline SpinOperator sigma_y() {
  SpinOperator m;
  m << 0, complexd(0, -1), complexd(0, 1), 0;
  return m;
}

inline SpinOperator sigma_z() {
  SpinOperator m;
  m << 1, 0, 0, -1;
  return m;
}

/// Spin operators adapted to an in-plane field at angle `omega` from the x axis:
/// sigma_b points along the field, sigma_perp along the in-plane normal.
/// They obey sigma_b * sigma_perp = i sigma_z.
struct InplaneBasis {
  SpinOperator sigma_b;
  SpinOperator sigma_perp;
};

inline InplaneBasis make_inplane_basis(double omega) {
  if (!std::isfinite(omega)) throw std::domain_error("make_inplane_basis: omega not finite");
  const double c = std::cos(omega), s = std::sin(omega);
  return {c * sigma_x() + s * sigma_y(), -s * sigma_x() + c * sigma_y()};
}

/// Cylindrical spin operators at azimuth `phi_angle`, plus the field-adapted
/// pair re-expressed through them.
struct CylBasis {
  SpinOperator sigma_rho;
  SpinOperator sigma_phi;
  SpinOperator sigma_b;
  SpinOperator sigma_perp;
};

inline CylBasis make_cyl_basis(double phi_angle, double omega) {
  if (!std::isfinite(phi_angle) || !std::isfinite(omega))
    throw std::domain_error("make_cyl_basis: angle not finite");
  const double c = std::cos(phi_angle), s = std::sin(phi_angle);
  CylBasis b;
  b.sigma_rho = c * sigma_x() + s * sigma_y();
  b.sigma_phi = c * sigma_y() - s * sigma_x();
  const double cw = std::cos(omega - phi_angle), sw = std::sin(omega - phi_angle);
  b.sigma_b = cw * b.sigma_rho + sw * b.sigma_phi;
  b.sigma_perp = cw * b.sigma_phi - sw * b.sigma_rho;
  return b;
}

/// Antilinear charge conjugation. The matrix convention is sigma_x, so that
/// the doublet (a, a*) is the +1 eigenstate and applying twice is the identity.
/// The matrix part is swappable for experiments with other conventions.
struct ChargeConjugation {
  SpinOperator matrix_part = sigma_x();
  bool conjugates = true;  // always true; kept explicit because the operator is antilinear
};

inline Spinor2 apply_charge_conjugation(const ChargeConjugation& c, const Spinor2& psi) {
  return c.conjugates ? Spinor2(c.matrix_part * psi.conjugate()) : Spinor2(c.matrix_part * psi);
}

struct MajoranaResult {
  bool is_majorana = false;
  std::optional<complexd> phase_c;  // best-fit unimodular c with C psi = c psi
};

/// Tests the Majorana condition C psi = c psi for some |c| = 1.
inline MajoranaResult majorana_check(const Spinor2& psi, double tolerance,
                                     const ChargeConjugation& c = {}) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::domain_error("majorana_check: zero spinor");
  const Spinor2 conj = apply_charge_conjugation(c, psi);
  const complexd fit = psi.dot(conj) / complexd(norm * norm, 0.0);
  const double residual = (conj - fit * psi).norm() / norm;
  if (residual <= tolerance && std::abs(std::abs(fit) - 1.0) <= tolerance)
    return {true, fit};
  return {false, std::nullopt};
}

/// Residual of the generalized-momentum identity: the A_z coupling written with
/// sigma_b sigma_z equals the same coupling written through i sigma_perp, which
/// is the matrix realizing the conjugation operator in that identity. Applied to
/// the standard basis spinors; returns the max deviation.
inline double generalized_momentum_identity(double a_z, double omega, double charge_e = 1.0) {
  if (!std::isfinite(a_z) || !std::isfinite(omega))
    throw std::domain_error("generalized_momentum_identity: input not finite");
  const InplaneBasis b = make_inplane_basis(omega);
  const complexd i(0, 1);
  const SpinOperator lhs = -i * charge_e * a_z * (b.sigma_b * sigma_z());
  const SpinOperator conj_matrix = i * b.sigma_perp;
  const SpinOperator rhs = i * charge_e * a_z * conj_matrix;
  const SpinOperator diff = lhs - rhs;
  double worst = 0.0;
  for (int k = 0; k < 2; ++k) {
    Spinor2 e = Spinor2::Zero();
    e(k) = 1.0;
    worst = std::max(worst, (diff * e).norm());
  }
  return worst;
}

}  // namespace indirac
