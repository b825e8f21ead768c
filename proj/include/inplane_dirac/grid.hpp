#pragma once

// Uniform rectangular grids over (x_B, x_perp) and centered finite differences.
// Residual maxima are taken over interior nodes; boundary rows are excluded.

#include "inplane_dirac/spin_algebra.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace indirac {

template <typename T>
struct Grid2D {
  int nb = 0, np = 0;          // node counts along x_B and x_perp
  double b0 = 0.0, p0 = 0.0;   // coordinates of node (0, 0)
  double hb = 1.0, hp = 1.0;   // spacings, > 0
  std::vector<T> values;       // row-major, index ib * np + ip

  Grid2D() = default;
  Grid2D(int nb_, int np_, double b0_, double p0_, double hb_, double hp_)
      : nb(nb_), np(np_), b0(b0_), p0(p0_), hb(hb_), hp(hp_),
        values(static_cast<size_t>(nb_) * np_) {
    if (nb < 1 || np < 1) throw std::domain_error("Grid2D: empty grid");
    if (!(hb > 0.0) || !(hp > 0.0)) throw std::domain_error("Grid2D: spacing must be > 0");
  }

  T& at(int ib, int ip) { return values[static_cast<size_t>(ib) * np + ip]; }
  const T& at(int ib, int ip) const { return values[static_cast<size_t>(ib) * np + ip]; }
  double xb(int ib) const { return b0 + ib * hb; }
  double xp(int ip) const { return p0 + ip * hp; }

  bool same_shape(int onb, int onp) const { return nb == onb && np == onp; }

  template <typename F>
  void fill(F&& f) {
    for (int ib = 0; ib < nb; ++ib)
      for (int ip = 0; ip < np; ++ip) at(ib, ip) = f(xb(ib), xp(ip));
  }
};

using ScalarField2D = Grid2D<complexd>;
using RealField2D = Grid2D<double>;

/// Spinor samples on a rectangular (x_B, x_perp) grid.
struct SampledSpinorField {
  Grid2D<Spinor2> grid;

  SampledSpinorField() = default;
  SampledSpinorField(int nb, int np, double b0, double p0, double hb, double hp)
      : grid(nb, np, b0, p0, hb, hp) {}

  template <typename F>
  static SampledSpinorField sample(int nb, int np, double b0, double p0, double hb, double hp,
                                   F&& f) {
    SampledSpinorField out(nb, np, b0, p0, hb, hp);
    out.grid.fill(f);
    return out;
  }
};

// centered first differences at interior nodes
template <typename T>
T diff_b(const Grid2D<T>& g, int ib, int ip) {
  return (g.at(ib + 1, ip) - g.at(ib - 1, ip)) / (2.0 * g.hb);
}

template <typename T>
T diff_p(const Grid2D<T>& g, int ib, int ip) {
  return (g.at(ib, ip + 1) - g.at(ib, ip - 1)) / (2.0 * g.hp);
}

/// Max over interior nodes of a node-wise residual functional.
template <typename T, typename F>
double interior_max(const Grid2D<T>& g, F&& node_residual) {
  if (g.nb < 3 || g.np < 3) throw std::domain_error("interior_max: grid needs >= 3 nodes per axis");
  double worst = 0.0;
  for (int ib = 1; ib + 1 < g.nb; ++ib)
    for (int ip = 1; ip + 1 < g.np; ++ip) worst = std::max(worst, node_residual(ib, ip));
  return worst;
}

}  // namespace indirac
