#include <catch2/catch.hpp>

#include "inplane_dirac/flux_lattice.hpp"

using namespace indirac;

TEST_CASE("flux profile bookkeeping") {
  const auto f = gaussian_flux_tube(32, 2.5);
  CHECK_NOTHROW(f.validate());
  CHECK(f.flux_quanta() == Approx(2.5).epsilon(1e-13));
  CHECK(std::abs(f.measured_flux() - f.total_flux) <= 1e-11);

  auto bad = f;
  bad.b_plaq[0] = 1.0;  // outside the central half
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  auto wrong = f;
  wrong.total_flux *= 1.01;
  CHECK_THROWS_AS(wrong.validate(), std::domain_error);
}

TEST_CASE("zero field solves to the zero potential") {
  const auto pot = poisson_solve(gaussian_flux_tube(24, 0.0));
  double worst = 0.0;
  for (double v : pot.phi) worst = std::max(worst, std::abs(v));
  CHECK(worst == 0.0);
}

TEST_CASE("uniform disk reproduces the logarithmic exterior") {
  // two resolutions of the same physical disk; Richardson extrapolation
  // removes the leading h^2 defect of the five-point stencil
  const double extent = 512.0;
  const double a = extent / 6.0;
  const auto fine = poisson_solve(uniform_disk_flux(512, 1.0, a, 1.0));
  const auto coarse = poisson_solve(uniform_disk_flux(256, 1.0, a, 2.0));
  const double slope = 1.0;  // one flux quantum at e = 1: Phi / 2 pi = 1
  const double cx = 0.5 * extent;

  double worst = 0.0;
  for (int i = 0; i <= 256; ++i)
    for (int j = 0; j <= 256; ++j) {
      const double x = 2.0 * i, y = 2.0 * j;
      const double r = std::hypot(x - cx, y - cx);
      if (r < 1.6 * a || r > 0.46 * extent) continue;
      const double extrapolated = (4.0 * fine.at(2 * i, 2 * j) - coarse.at(i, j)) / 3.0;
      worst = std::max(worst, std::abs(extrapolated - slope * std::log(r / a)));
    }
  CHECK(worst <= 1e-6);
}

TEST_CASE("gaussian tube far field slope") {
  const int L = 64;
  const auto flux = gaussian_flux_tube(L, 2.0);
  const auto pot = poisson_solve(flux);
  const double cx = 0.5 * L;
  // radial fit of phi against ln r between the support and the boundary
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 0; i <= L; ++i)
    for (int j = 0; j <= L; ++j) {
      const double r = std::hypot(i - cx, j - cx);
      if (r < 0.30 * L || r > 0.46 * L) continue;
      const double lx = std::log(r);
      sx += lx; sy += pot.at(i, j); sxx += lx * lx; sxy += lx * pot.at(i, j);
      ++n;
    }
  const double fitted = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double expected = flux.total_flux / (2.0 * M_PI);
  CHECK(std::abs(fitted - expected) <= 0.01 * std::abs(expected));
}

TEST_CASE("poisson interior residual contract") {
  const auto flux = gaussian_flux_tube(48, 3.5);
  CHECK_NOTHROW(poisson_solve(flux));  // the residual guard is in the solver
}
