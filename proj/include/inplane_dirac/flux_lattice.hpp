#pragma once

// Perpendicular-field flux profiles on a square lattice and the solved scalar
// potential. The potential solve is the open-plane route: Dirichlet boundary
// values from the logarithmic far field of the compact flux.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace indirac {

/// Plaquette-sampled perpendicular field on an L x L lattice. The field is
/// compactly supported inside the central half of the grid and rescaled so the
/// lattice sum reproduces the declared total flux exactly.
struct FluxProfile2D {
  int size_l = 0;          // nodes per side
  double spacing = 1.0;    // h
  double charge_e = 1.0;
  double total_flux = 0.0; // declared, in raw units (flux quantum = 2 pi / e)
  double support_r = 0.0;  // radius enclosing the field, reference of the far-field log
  std::vector<double> b_plaq;  // L*L plaquette-centered samples, row-major

  double flux_quanta() const { return total_flux * charge_e / (2.0 * M_PI); }
  double support_radius() const { return support_r > 0.0 ? support_r : size_l * spacing / 4.0; }

  double measured_flux() const {
    double s = 0.0;
    for (double b : b_plaq) s += b;
    return s * spacing * spacing;
  }

  void validate() const {
    if (size_l < 8) throw std::domain_error("FluxProfile2D: lattice too small");
    if (!(spacing > 0.0)) throw std::domain_error("FluxProfile2D: spacing must be > 0");
    if (b_plaq.size() != static_cast<size_t>(size_l) * size_l)
      throw std::domain_error("FluxProfile2D: sample count mismatch");
    if (std::abs(measured_flux() - total_flux) > 1e-10 * (1.0 + std::abs(total_flux)))
      throw std::domain_error("FluxProfile2D: lattice sum disagrees with declared flux");
    const double rc = size_l * spacing / 4.0;  // compact support inside the central half
    const double cx = 0.5 * size_l * spacing, cy = cx;
    for (int i = 0; i < size_l; ++i)
      for (int j = 0; j < size_l; ++j) {
        const double px = (i + 0.5) * spacing, py = (j + 0.5) * spacing;
        const double r2 = (px - cx) * (px - cx) + (py - cy) * (py - cy);
        if (r2 > rc * rc + 1e-12 && b_plaq[static_cast<size_t>(i) * size_l + j] != 0.0)
          throw std::domain_error("FluxProfile2D: field outside the central half");
      }
  }
};

/// Normalized Gaussian flux tube, sigma = L h / 12, truncated at L h / 4 and
/// rescaled to the requested number of flux quanta.
inline FluxProfile2D gaussian_flux_tube(int size_l, double flux_quanta, double spacing = 1.0,
                                        double charge_e = 1.0) {
  FluxProfile2D f;
  f.size_l = size_l;
  f.spacing = spacing;
  f.charge_e = charge_e;
  f.total_flux = 2.0 * M_PI * flux_quanta / charge_e;
  f.b_plaq.assign(static_cast<size_t>(size_l) * size_l, 0.0);
  const double cx = 0.5 * size_l * spacing, cy = cx;
  const double sigma = size_l * spacing / 12.0;
  const double rc = size_l * spacing / 4.0;
  f.support_r = rc;
  double sum = 0.0;
  for (int i = 0; i < size_l; ++i)
    for (int j = 0; j < size_l; ++j) {
      const double px = (i + 0.5) * spacing, py = (j + 0.5) * spacing;
      const double r2 = (px - cx) * (px - cx) + (py - cy) * (py - cy);
      if (r2 > rc * rc) continue;
      const double b = std::exp(-r2 / (2.0 * sigma * sigma));
      f.b_plaq[static_cast<size_t>(i) * size_l + j] = b;
      sum += b * spacing * spacing;
    }
  if (flux_quanta != 0.0) {
    if (!(sum > 0.0)) throw std::domain_error("gaussian_flux_tube: empty support");
    for (double& b : f.b_plaq) b *= f.total_flux / sum;
  } else {
    for (double& b : f.b_plaq) b = 0.0;
  }
  return f;
}

/// Uniform disk of flux. Plaquettes straddling the rim carry their coverage
/// fraction (supersampled), which keeps the multipole error of the sharp edge
/// at the quadrature order rather than first order in the spacing.
inline FluxProfile2D uniform_disk_flux(int size_l, double flux_quanta, double radius,
                                       double spacing = 1.0, double charge_e = 1.0) {
  FluxProfile2D f;
  f.size_l = size_l;
  f.spacing = spacing;
  f.charge_e = charge_e;
  f.total_flux = 2.0 * M_PI * flux_quanta / charge_e;
  f.support_r = radius;
  f.b_plaq.assign(static_cast<size_t>(size_l) * size_l, 0.0);
  const double cx = 0.5 * size_l * spacing, cy = cx;
  const int sub = 64;
  double sum = 0.0;
  for (int i = 0; i < size_l; ++i)
    for (int j = 0; j < size_l; ++j) {
      const double px = (i + 0.5) * spacing, py = (j + 0.5) * spacing;
      const double r = std::hypot(px - cx, py - cy);
      double coverage = 0.0;
      if (r < radius - spacing) {
        coverage = 1.0;
      } else if (r < radius + spacing) {
        int inside = 0;
        for (int a = 0; a < sub; ++a)
          for (int b = 0; b < sub; ++b) {
            const double qx = (i + (a + 0.5) / sub) * spacing;
            const double qy = (j + (b + 0.5) / sub) * spacing;
            if (std::hypot(qx - cx, qy - cy) <= radius) ++inside;
          }
        coverage = double(inside) / (sub * sub);
      }
      f.b_plaq[static_cast<size_t>(i) * size_l + j] = coverage;
      sum += coverage * spacing * spacing;
    }
  for (double& b : f.b_plaq) b *= f.total_flux / sum;
  return f;
}

/// Scalar potential with lap phi = B, node-sampled.
struct ScalarPotential2D {
  int size_l = 0;
  double spacing = 1.0;
  double r0 = 1.0;  // reference radius of the boundary log
  std::vector<double> phi;  // (L+1) x (L+1) node samples

  double at(int i, int j) const { return phi[static_cast<size_t>(i) * (size_l + 1) + j]; }
  double node_x(int i) const { return i * spacing; }
};

/// Direct 5-point solve of lap phi = B with boundary values pinned to the
/// logarithmic far field (Phi / 2 pi) ln(r / r0), r0 the support radius.
inline ScalarPotential2D poisson_solve(const FluxProfile2D& flux) {
  flux.validate();
  const int L = flux.size_l;
  const int n = L + 1;  // node grid
  const double h = flux.spacing;
  const double cx = 0.5 * L * h, cy = cx;
  const double r0 = flux.support_radius();
  const double slope = flux.total_flux * flux.charge_e / (2.0 * M_PI);

  ScalarPotential2D pot;
  pot.size_l = L;
  pot.spacing = h;
  pot.r0 = r0;
  pot.phi.assign(static_cast<size_t>(n) * n, 0.0);

  // node-centered source from the four adjacent plaquettes
  auto b_node = [&](int i, int j) {
    double acc = 0.0;
    int cnt = 0;
    for (int di = -1; di <= 0; ++di)
      for (int dj = -1; dj <= 0; ++dj) {
        const int pi = i + di, pj = j + dj;
        if (pi < 0 || pj < 0 || pi >= L || pj >= L) continue;
        acc += flux.b_plaq[static_cast<size_t>(pi) * L + pj];
        ++cnt;
      }
    return cnt ? acc / cnt : 0.0;
  };

  if (flux.total_flux == 0.0 && flux.measured_flux() == 0.0) return pot;  // zero boundary, zero field

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
        const double r = std::hypot(i * h - cx, j * h - cy);
        pot.phi[static_cast<size_t>(i) * n + j] = slope * std::log(r / r0);
      }

  const int ni = n - 2;
  auto unk = [&](int i, int j) { return (i - 1) * ni + (j - 1); };
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs(ni * ni);
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) {
      const int row = unk(i, j);
      double b = b_node(i, j) * h * h;
      trips.emplace_back(row, row, -4.0);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int ii = i + di[d], jj = j + dj[d];
        if (ii >= 1 && ii < n - 1 && jj >= 1 && jj < n - 1)
          trips.emplace_back(row, unk(ii, jj), 1.0);
        else
          b -= pot.phi[static_cast<size_t>(ii) * n + jj];
      }
      rhs(row) = b;
    }
  Eigen::SparseMatrix<double> a(ni * ni, ni * ni);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("poisson_solve: factorization failed");
  const Eigen::VectorXd sol = ldlt.solve(rhs);

  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) pot.phi[static_cast<size_t>(i) * n + j] = sol(unk(i, j));

  // interior residual guard
  double worst = 0.0, bmax = 0.0;
  for (double b : flux.b_plaq) bmax = std::max(bmax, std::abs(b));
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) {
      const double lap = (pot.at(i + 1, j) + pot.at(i - 1, j) + pot.at(i, j + 1) +
                          pot.at(i, j - 1) - 4.0 * pot.at(i, j)) /
                         (h * h);
      worst = std::max(worst, std::abs(lap - b_node(i, j)));
    }
  if (bmax > 0.0 && worst > 1e-8 * bmax)
    throw std::runtime_error("poisson_solve: interior residual above tolerance");
  return pot;
}

}  // namespace indirac
