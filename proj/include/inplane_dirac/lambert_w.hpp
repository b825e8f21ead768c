#pragma once

// Principal-branch Lambert W, double precision. Initial guess from series /
// asymptotic forms, polished with Halley iterations.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace indirac {

/// W0(x) for x >= -1/e. Solves w e^w = x.
inline double lambert_w0(double x) {
  const double inv_e = std::exp(-1.0);
  if (!std::isfinite(x)) throw std::domain_error("lambert_w0: argument not finite");
  if (x < -inv_e - 1e-15) throw std::domain_error("lambert_w0: argument below -1/e");
  if (x <= -inv_e + 1e-15) return -1.0;  // branch point; Halley would divide by zero
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    // near the branch point: W ~ -1 + p - p^2/3, p = sqrt(2(1+e x))
    const double p = std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    w = -1.0 + p - p * p / 3.0;
  } else if (x < 2.0) {
    // series seed is good enough for Halley
    w = x * (1.0 - x + 1.5 * x * x) / (1.0 + 0.5 * x);
  } else {
    const double l1 = std::log(x), l2 = std::log(std::log(x));
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace indirac
