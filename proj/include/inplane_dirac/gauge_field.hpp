#pragma once

// Gauge scalar profile for the in-plane field, its matrix exponential, the
// flux-quantization roots and the quantized Hall surface current.
//
// Natural units (hbar = c = e = 1) by default; every constant is an explicit
// field so other unit systems can be evaluated.

#include "inplane_dirac/lambert_w.hpp"
#include "inplane_dirac/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace indirac {

struct FieldConfig {
  double flux_phi = 1.0;  // magnetic flux per unit length
  double l0 = 1.0;        // reference length, > 0
  double c_const = 0.0;   // integration constant (length units)
  double charge_e = 1.0;
  double omega = 0.0;  // in-plane field angle

  void validate() const {
    if (!(l0 > 0.0)) throw std::domain_error("FieldConfig: l0 must be > 0");
    if (!std::isfinite(flux_phi) || !std::isfinite(c_const) || !std::isfinite(charge_e) ||
        !std::isfinite(omega))
      throw std::domain_error("FieldConfig: non-finite field");
  }
};

/// Real part g of the gauge scalar, phi = -i g. With C = 0 this is
/// Phi * x (ln|x/l0| - 1), the form all downstream operations use.
inline double gauge_scalar_real(const FieldConfig& cfg, double x_perp) {
  return cfg.flux_phi * (x_perp * std::log(std::abs(x_perp / cfg.l0)) + cfg.c_const - x_perp);
}

/// Scalar coefficient of sigma_B in the gauge scalar: purely imaginary.
inline complexd phi_profile(const FieldConfig& cfg, double x_perp) {
  cfg.validate();
  if (x_perp == 0.0) throw std::domain_error("phi_profile: x_perp = 0 is the singular point");
  return complexd(0.0, -gauge_scalar_real(cfg, x_perp));
}

/// Field strength B = i d2/dx2 phi = Phi / x_perp.
inline double b_profile(const FieldConfig& cfg, double x_perp) {
  cfg.validate();
  if (!(x_perp > 0.0)) throw std::domain_error("b_profile: x_perp must be > 0");
  return cfg.flux_phi / x_perp;
}

/// |i * centered second difference of phi_profile - b_profile|, for checking the
/// profile against its defining relation.
inline double b_profile_fd_residual(const FieldConfig& cfg, double x_perp, double h) {
  const complexd i(0, 1);
  const complexd d2 = (phi_profile(cfg, x_perp + h) - 2.0 * phi_profile(cfg, x_perp) +
                       phi_profile(cfg, x_perp - h)) /
                      (h * h);
  return std::abs(i * d2 - complexd(b_profile(cfg, x_perp), 0.0));
}

/// Matrix exponential e^{-i e phi sigma_B} via the sigma_B eigen-projectors.
/// The exponent is real (phi is imaginary), so the factor is a real stretch of
/// the two sigma_B eigencomponents. Throws when the exponent would overflow.
inline SpinOperator exp_factor(const FieldConfig& cfg, double x_perp) {
  cfg.validate();
  if (!(x_perp > 0.0)) throw std::domain_error("exp_factor: x_perp must be > 0");
  const double expo = cfg.charge_e * gauge_scalar_real(cfg, x_perp);
  if (std::abs(expo) > 700.0)
    throw std::overflow_error("exp_factor: exponent magnitude exceeds double range");
  const InplaneBasis b = make_inplane_basis(cfg.omega);
  const SpinOperator id = SpinOperator::Identity();
  const SpinOperator p_plus = 0.5 * (id + b.sigma_b);
  const SpinOperator p_minus = 0.5 * (id - b.sigma_b);
  return std::exp(-expo) * p_plus + std::exp(expo) * p_minus;
}

/// Magnitude of the sigma_B = s eigencomponent of exp_factor.
inline double exp_factor_eigencomponent(const FieldConfig& cfg, double x_perp, int s) {
  if (s != 1 && s != -1) throw std::domain_error("exp_factor_eigencomponent: s must be +-1");
  return std::exp(-cfg.charge_e * gauge_scalar_real(cfg, x_perp) * s);
}

struct QuantizationRoot {
  int n = 0;
  double x_perp = 0.0;
  double residual = 0.0;
};

/// Roots of Phi * x (ln(x/l0) - 1) = n pi on the branch x >= e*l0, from the
/// principal Lambert W and a bisection polish.
inline std::vector<QuantizationRoot> quantize_positions(const FieldConfig& cfg, int n_max) {
  cfg.validate();
  if (cfg.flux_phi == 0.0)
    throw std::domain_error("quantize_positions: Phi = 0 admits no quantization");
  if (n_max < 0) throw std::domain_error("quantize_positions: n_max must be >= 0");

  auto lhs = [&](double x) {
    return cfg.flux_phi * x * (std::log(x / cfg.l0) - 1.0);
  };

  std::vector<QuantizationRoot> roots;
  roots.reserve(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double target = n * M_PI;
    const double warg = target / (cfg.flux_phi * cfg.l0 * std::exp(1.0));
    if (warg < 0.0)
      throw std::domain_error("quantize_positions: negative Lambert-W argument on this branch");
    double x = cfg.l0 * std::exp(lambert_w0(warg) + 1.0);

    // bisection polish around the closed-form seed
    double lo = x, hi = x;
    double flo = lhs(lo) - target, fhi = flo;
    double span = std::max(1e-12 * x, 1e-300);
    while (flo > 0.0) {
      lo -= span;
      span *= 2.0;
      if (lo < cfg.l0 * std::exp(1.0)) { lo = cfg.l0 * std::exp(1.0); break; }
      flo = lhs(lo) - target;
    }
    span = std::max(1e-12 * x, 1e-300);
    while (fhi < 0.0) {
      hi += span;
      span *= 2.0;
      fhi = lhs(hi) - target;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (lhs(mid) - target <= 0.0) lo = mid; else hi = mid;
    }
    x = 0.5 * (lo + hi);
    roots.push_back({n, x, std::abs(lhs(x) - target)});
  }
  return roots;
}

/// Quantized Hall surface current K = 2 pi N hbar c / (e x_perp).
inline double hall_current(int n_modes, double x_perp, double hbar = 1.0, double c = 1.0,
                           double charge_e = 1.0) {
  if (!(x_perp > 0.0)) throw std::domain_error("hall_current: x_perp must be > 0");
  if (n_modes < 0) throw std::domain_error("hall_current: N must be >= 0");
  return 2.0 * M_PI * n_modes * hbar * c / (charge_e * x_perp);
}

}  // namespace indirac
