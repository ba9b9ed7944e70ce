#include <doctest.h>

#include "dbar/errors.hpp"
#include "dbar/experiments.hpp"
#include "dbar/reconstruct.hpp"

using namespace dbar;

TEST_CASE("zero scattering data reconstructs q0 = 0 and sigma = s") {
  const TruncationSpec spec{4.0, 4.0, 0.0, 1.05};
  const PeriodicGrid grid(6, 8.4);
  const DbarSolver solver(ScatteringGrid::zero(grid), Energy(-1.0));
  const std::vector<cplx> z{0.0, cplx{0.3, 0.4}};
  const auto q = reconstruct_potential(solver, z, 0.01, outer_band_nodes(grid, spec));
  for (cplx v : q.values) CHECK(v == cplx{});
  const auto s = reconstruct_conductivity(solver, z, 1.7);
  for (cplx v : s.values) CHECK(v.real() == doctest::Approx(1.7));
  CHECK(s.valid == std::vector<bool>{true, true});
}

TEST_CASE("averaging sets") {
  const PeriodicGrid grid(6, 8.4);
  const TruncationSpec spec{4.0, 6.0, 0.5, 1.05};
  const auto band = outer_band_nodes(grid, spec);
  REQUIRE(!band.empty());
  for (std::size_t p : band) {
    const cplx l = grid.node(p);
    const double edge = spec.radius(std::arg(l));
    CHECK(std::abs(l) < edge);
    CHECK(std::abs(l) >= spec.r1 + 0.8 * (edge - spec.r1) - 1e-12);
  }
  for (std::size_t p : annulus_nodes(grid, 2.4, 2.6)) CHECK(std::abs(std::abs(grid.node(p)) - 2.5) <= 0.1 + 1e-12);
  const DbarSolver solver(ScatteringGrid::zero(grid), Energy(-1.0));
  CHECK_THROWS_AS(reconstruct_conductivity(solver, {0.0}, 1.0, 2.5, 1e-4), InvalidArgument);
  CHECK_THROWS_AS(reconstruct_potential(solver, {0.0}, 0.0, band), InvalidArgument);
}

TEST_CASE("potential reconstruction from LS scattering data") {
  const Energy energy(-1.0);
  const RadialProfile p = case_potential(2);
  const std::vector<double> radii = linspace(1.06, 6.0, 40);
  const auto t = radial_scattering_ls([&](double r) { return p.value(r); }, radii, energy, 6);
  const TruncationSpec spec{6.0, 6.0, 0.0, 1.05};
  const PeriodicGrid grid(7, 12.6);
  const ScatteringGrid data = truncate_scattering(radial_to_grid(grid, radii, t), spec);
  const DbarSolver solver(data, energy);
  const auto rec = reconstruct_potential(solver, {0.0, 0.5}, 0.01, outer_band_nodes(grid, spec));
  CHECK(rec.values[0].real() == doctest::Approx(p.value(0.0)).epsilon(0.1));
  CHECK(rec.values[1].real() == doctest::Approx(p.value(0.5)).epsilon(0.1));
  CHECK(std::abs(rec.values[0].imag()) < 0.05);
}
