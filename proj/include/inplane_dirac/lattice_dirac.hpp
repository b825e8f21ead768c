#pragma once

// Lattice Dirac operator for the perpendicular-field zero-mode problem.
//
// Geometry: torus with antiperiodic fermions. The smooth flux tube is carried
// by unimodular link phases; the fractional part of the total flux is absorbed
// by two quarter-style compensating vortices placed far from the tube, each an
// angle of -pi * frac through a single plaquette. The total lattice charge is
// then exactly floor(flux quanta), realizing the open-plane mode count: an
// open boundary leaves the marginal half-integer mode critically balanced and
// the observed count flips with lattice size, while the compensated torus pins
// it (measured over L = 16..32).
//
// Operators derived from the same links:
//   - naive central-difference Dirac operator (anti-commutes with sigma_z),
//     used for apply-residual checks and spectral symmetry tests;
//   - Wilson kernel and the overlap operator built from it, which carries
//     machine-exact zero modes and is what the mode counting runs on.

#include "inplane_dirac/flux_lattice.hpp"
#include "inplane_dirac/spin_algebra.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace indirac {

using SparseC = Eigen::SparseMatrix<complexd>;

struct LatticeDiracOp {
  int size_l = 0;
  double spacing = 1.0;
  double charge_e = 1.0;
  double wilson_r = 1.0;
  double kernel_mass = 1.0;  // m0 of the overlap kernel in lattice units
  std::vector<double> theta_x, theta_y;  // link angles, L*L each, wraparound rows twisted
  std::vector<double> plaq_target;       // target plaquette angles (mod 2 pi at the vortices)
  std::vector<double> chi_plaq;          // gauge potential behind the links, plaquette-centered
  double flux_quanta = 0.0;

  /// Gauge potential interpolated to a node: mean of the four plaquettes
  /// around it.
  double chi_node(int i, int j) const {
    return 0.25 * (chi_plaq[site(i, j)] + chi_plaq[site(i - 1, j)] + chi_plaq[site(i, j - 1)] +
                   chi_plaq[site(i - 1, j - 1)]);
  }

  int sites() const { return size_l * size_l; }
  int dim() const { return 2 * sites(); }
  int wrap(int a) const { return (a % size_l + size_l) % size_l; }
  int site(int i, int j) const { return wrap(i) * size_l + wrap(j); }

  /// Worst-case plaquette holonomy defect against the target flux, mod 2 pi.
  double plaquette_residual() const {
    double worst = 0.0;
    for (int i = 0; i < size_l; ++i)
      for (int j = 0; j < size_l; ++j) {
        const double circ = theta_x[site(i, j)] + theta_y[site(i + 1, j)] -
                            theta_x[site(i, j + 1)] - theta_y[site(i, j)];
        const double want = plaq_target[site(i, j)];
        worst = std::max(worst, std::abs(std::remainder(circ - want, 2.0 * M_PI)));
      }
    return worst;
  }

  /// Multiplies the links by the gradient of a node-sampled gauge function;
  /// a unitary conjugation of every operator built from the links.
  void gauge_transform(const std::vector<double>& chi_nodes) {
    if (chi_nodes.size() != static_cast<size_t>(sites()))
      throw std::invalid_argument("gauge_transform: need one sample per site");
    for (int i = 0; i < size_l; ++i)
      for (int j = 0; j < size_l; ++j) {
        theta_x[site(i, j)] += charge_e * (chi_nodes[site(i + 1, j)] - chi_nodes[site(i, j)]);
        theta_y[site(i, j)] += charge_e * (chi_nodes[site(i, j + 1)] - chi_nodes[site(i, j)]);
      }
  }

  /// Naive central-difference gauged Dirac operator, spinor-major indexing
  /// (2 * site + component). Anti-commutes with the sigma_z grading exactly.
  /// Hop phases are the conjugated links, matching the covariant derivative
  /// d - i e A: positive flux then puts the zero modes in the sigma_z = +1
  /// component.
  SparseC naive_operator() const {
    const complexd i1(0, 1);
    const double h = spacing;
    std::vector<Eigen::Triplet<complexd>> t;
    t.reserve(static_cast<size_t>(sites()) * 8);
    for (int i = 0; i < size_l; ++i)
      for (int j = 0; j < size_l; ++j) {
        const int s = site(i, j);
        const complexd uxp = std::exp(-i1 * theta_x[s]);
        const complexd uxm = std::exp(i1 * theta_x[site(i - 1, j)]);
        const complexd uyp = std::exp(-i1 * theta_y[s]);
        const complexd uym = std::exp(i1 * theta_y[site(i, j - 1)]);
        const int xp = site(i + 1, j), xm = site(i - 1, j), yp = site(i, j + 1), ym = site(i, j - 1);
        // sigma_x (D_x) + sigma_y (D_y): couples components 0 <-> 1
        // row component 0 of D psi: d_x psi_1 - i d_y psi_1
        t.emplace_back(2 * s, 2 * xp + 1, uxp / (2 * h));
        t.emplace_back(2 * s, 2 * xm + 1, -uxm / (2 * h));
        t.emplace_back(2 * s, 2 * yp + 1, -i1 * uyp / (2 * h));
        t.emplace_back(2 * s, 2 * ym + 1, i1 * uym / (2 * h));
        // row component 1: d_x psi_0 + i d_y psi_0
        t.emplace_back(2 * s + 1, 2 * xp, uxp / (2 * h));
        t.emplace_back(2 * s + 1, 2 * xm, -uxm / (2 * h));
        t.emplace_back(2 * s + 1, 2 * yp, i1 * uyp / (2 * h));
        t.emplace_back(2 * s + 1, 2 * ym, -i1 * uym / (2 * h));
      }
    SparseC m(dim(), dim());
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }

  /// Wilson kernel X = D_W - m0 / h. gamma5-Hermitian: X^dag = sz X sz.
  SparseC wilson_kernel() const {
    const complexd i1(0, 1);
    const double h = spacing, r = wilson_r;
    std::vector<Eigen::Triplet<complexd>> t;
    t.reserve(static_cast<size_t>(sites()) * 10);
    const complexd diag((2.0 * r - kernel_mass) / h, 0.0);
    for (int i = 0; i < size_l; ++i)
      for (int j = 0; j < size_l; ++j) {
        const int s = site(i, j);
        t.emplace_back(2 * s, 2 * s, diag);
        t.emplace_back(2 * s + 1, 2 * s + 1, diag);
        const complexd uxp = std::exp(-i1 * theta_x[s]) / h;
        const complexd uxm = std::exp(i1 * theta_x[site(i - 1, j)]) / h;
        const complexd uyp = std::exp(-i1 * theta_y[s]) / h;
        const complexd uym = std::exp(i1 * theta_y[site(i, j - 1)]) / h;
        const int xp = site(i + 1, j), xm = site(i - 1, j), yp = site(i, j + 1), ym = site(i, j - 1);
        // hop +x: (sigma_x - r) / 2, hop -x: (-sigma_x - r) / 2, same pattern in y
        t.emplace_back(2 * s, 2 * xp, -0.5 * r * uxp);
        t.emplace_back(2 * s, 2 * xp + 1, 0.5 * uxp);
        t.emplace_back(2 * s + 1, 2 * xp, 0.5 * uxp);
        t.emplace_back(2 * s + 1, 2 * xp + 1, -0.5 * r * uxp);
        t.emplace_back(2 * s, 2 * xm, -0.5 * r * uxm);
        t.emplace_back(2 * s, 2 * xm + 1, -0.5 * uxm);
        t.emplace_back(2 * s + 1, 2 * xm, -0.5 * uxm);
        t.emplace_back(2 * s + 1, 2 * xm + 1, -0.5 * r * uxm);
        t.emplace_back(2 * s, 2 * yp, -0.5 * r * uyp);
        t.emplace_back(2 * s, 2 * yp + 1, -0.5 * i1 * uyp);
        t.emplace_back(2 * s + 1, 2 * yp, 0.5 * i1 * uyp);
        t.emplace_back(2 * s + 1, 2 * yp + 1, -0.5 * r * uyp);
        t.emplace_back(2 * s, 2 * ym, -0.5 * r * uym);
        t.emplace_back(2 * s, 2 * ym + 1, 0.5 * i1 * uym);
        t.emplace_back(2 * s + 1, 2 * ym, -0.5 * i1 * uym);
        t.emplace_back(2 * s + 1, 2 * ym + 1, -0.5 * r * uym);
      }
    SparseC m(dim(), dim());
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }

  /// Hermitian kernel H = sigma_z X.
  SparseC hermitian_kernel() const {
    SparseC x = wilson_kernel();
    for (int k = 0; k < x.outerSize(); ++k)
      for (SparseC::InnerIterator it(x, k); it; ++it)
        if (it.row() % 2 == 1) it.valueRef() = -it.value();
    return x;
  }
};

/// Links for a flux profile on the antiperiodic torus, fractional charge
/// compensated by two single-plaquette vortices in the corner region.
inline LatticeDiracOp lattice_assemble(const FluxProfile2D& flux, double charge_e_override = -1.0) {
  flux.validate();
  LatticeDiracOp op;
  op.size_l = flux.size_l;
  op.spacing = flux.spacing;
  op.charge_e = charge_e_override > 0 ? charge_e_override : flux.charge_e;
  const int L = op.size_l;
  const int n = L * L;
  const double h = op.spacing;

  // target plaquette angles; the fractional part of the flux (taken toward
  // zero so negative fields mirror positive ones) is absorbed by the two
  // compensating vortices, leaving total lattice charge trunc(nf)
  std::vector<double> f(n, 0.0);
  for (int k = 0; k < n; ++k) f[k] = op.charge_e * flux.b_plaq[k] * h * h;
  const double nf = flux.flux_quanta() * (op.charge_e / flux.charge_e);
  op.flux_quanta = nf;
  const double int_part = std::trunc(nf);
  const double frac = nf - int_part;  // in (-1, 1)
  op.plaq_target = f;
  if (frac != 0.0) {
    op.plaq_target[op.site(1, 1)] += -M_PI * frac;
    op.plaq_target[op.site(L - 2, L - 2)] += -M_PI * frac;
  }
  // exact-solvability bookkeeping: the integer part of the total winding rides
  // on the first vortex plaquette and is invisible in the link phases
  std::vector<double> f_solve = f;
  f_solve[op.site(1, 1)] += -M_PI * frac - 2.0 * M_PI * int_part;
  f_solve[op.site(L - 2, L - 2)] += -M_PI * frac;

  // periodic lattice Poisson with one pinned node
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      const int row = op.site(i, j);
      if (row == 0) {
        trips.emplace_back(0, 0, 1.0);
        continue;
      }
      trips.emplace_back(row, row, -4.0);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int c = op.site(i + di[d], j + dj[d]);
        if (c != 0) trips.emplace_back(row, c, 1.0);
      }
      rhs(row) = f_solve[row];
    }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("lattice_assemble: gauge solve failed");
  const Eigen::VectorXd chi = lu.solve(rhs);

  op.theta_x.assign(n, 0.0);
  op.theta_y.assign(n, 0.0);
  op.chi_plaq.assign(chi.data(), chi.data() + n);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      op.theta_x[op.site(i, j)] = -(chi(op.site(i, j)) - chi(op.site(i, j - 1)));
      op.theta_y[op.site(i, j)] = chi(op.site(i, j)) - chi(op.site(i - 1, j));
    }
  // antiperiodic twist on the wraparound links
  for (int j = 0; j < L; ++j) op.theta_x[op.site(L - 1, j)] += M_PI;
  for (int i = 0; i < L; ++i) op.theta_y[op.site(i, L - 1)] += M_PI;
  return op;
}

}  // namespace indirac
