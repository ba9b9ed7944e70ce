#include <doctest.h>

#include "dbar/bie.hpp"
#include "dbar/errors.hpp"
#include "dbar/ls_solver.hpp"
#include "dbar/profiles.hpp"
#include "oracles.hpp"

using namespace dbar;

namespace {

BieConfig desk() {
  BieConfig c;
  c.boundary_points = 128;
  return c;
}

}  // namespace

TEST_CASE("ellipse radius hits the semidiameters") {
  const TruncationSpec spec{11.0, 13.0, pi / 2, 1.05};
  CHECK(spec.radius(pi / 2) == doctest::Approx(11.0));
  CHECK(spec.radius(0.0) == doctest::Approx(13.0));
  CHECK(spec.outer_radius() == 13.0);
  CHECK(TruncationSpec{4, 4, 0.3, 1.05}.radius(1.234) == doctest::Approx(4.0));
  CHECK_THROWS_AS((TruncationSpec{4, 4, 0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((TruncationSpec{1.02, 4, 0, 1.05}.validate()), InvalidArgument);
}

TEST_CASE("single layer rotates with arg lambda") {
  const Energy energy(-1.0);
  const Eigen::MatrixXcd direct = assemble_single_layer(std::polar(2.2, 0.9), energy, 6, desk());
  const Eigen::MatrixXcd radial = assemble_single_layer(2.2, energy, 6, desk());
  Eigen::MatrixXcd rotated = radial;
  for (int l = -6; l <= 6; ++l)
    for (int n = -6; n <= 6; ++n) rotated(l + 6, n + 6) *= std::polar(1.0, (n - l) * 0.9);
  CHECK(oracle::rel_diff(rotated, direct) < 1e-8);
}

TEST_CASE("log split makes S independent of the boundary resolution") {
  const Energy energy(-1.0);
  BieConfig coarse = desk();
  BieConfig fine = desk();
  fine.boundary_points = 256;
  const Eigen::MatrixXcd a = assemble_single_layer(3.0, energy, 8, coarse);
  const Eigen::MatrixXcd b = assemble_single_layer(3.0, energy, 8, fine);
  CHECK(oracle::rel_diff(a, b) < 1e-5);
  CHECK_THROWS_AS(assemble_single_layer(3.0, energy, 40, coarse), InvalidArgument);
}

TEST_CASE("single layer table interpolates between radii") {
  const Energy energy(-1.0);
  const cplx lambda = std::polar(3.37, -1.1);
  const Eigen::MatrixXcd direct = assemble_single_layer(lambda, energy, 6, desk());
  const SingleLayerTable coarse(energy, 6, SingleLayerTable::log_radii(1.06, 8.0, 24), desk());
  const SingleLayerTable fine(energy, 6, SingleLayerTable::log_radii(1.06, 8.0, 47), desk());
  const double e_coarse = oracle::rel_diff(coarse.at(lambda), direct);
  const double e_fine = oracle::rel_diff(fine.at(lambda), direct);
  CHECK(e_coarse < 2e-4);
  // Cubic interpolation: halving the spacing gains about 2^4.
  CHECK(e_fine < e_coarse / 8.0);
  CHECK_THROWS_AS(SingleLayerTable(energy, 6, {1.02, 2.0}, desk()), InvalidArgument);
}

TEST_CASE("identical DN maps give zero scattering") {
  const Energy energy(-1.0);
  const DNMatrix l0 = dn_homogeneous(energy, 8);
  const Eigen::MatrixXcd s = assemble_single_layer(2.5, energy, 8, desk());
  const BoundarySolution sol = solve_boundary_psi(l0, l0, s, 2.5, energy, 128);
  REQUIRE(sol.ok);
  CHECK(std::abs(scattering_from_psi(l0, l0, sol.psi, 2.5, energy, 128)) == 0.0);
}

TEST_CASE("BIE scattering agrees with the LS route") {
  const Energy energy(-1.0);
  const RadialProfile p = validation_potential();
  const DNMatrix lq = dn_radial([&](double r) { return p.value(r) + 1.0; }, 16);
  const DNMatrix l0 = dn_homogeneous(energy, 16);
  const PeriodicGrid grid(7, 2.1);
  const auto q0 = PotentialField::sample(grid, [&](cplx z) { return cplx{p.value(std::abs(z))}; });
  for (double rho : {2.0, 4.0}) {
    const cplx lambda = std::polar(rho, 0.4);
    const BoundarySolution sol = solve_boundary_psi(lq, l0, lambda, energy, desk());
    REQUIRE(sol.ok);
    const cplx bie = scattering_from_psi(lq, l0, sol.psi, lambda, energy, 128);
    const cplx ls = scattering_direct(q0, solve_mu(q0, lambda, energy), energy);
    CAPTURE(rho);
    CHECK(std::abs(bie - ls) < 5e-3 * std::abs(ls));
    CHECK(std::abs(bie.imag()) < 1e-8 * std::abs(bie));
  }
}

TEST_CASE("truncation rule") {
  const PeriodicGrid grid(6, 8.0);
  ScatteringGrid t = ScatteringGrid::zero(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double r = std::abs(grid.node(p));
    if (r > 1.05) {
      t.values(static_cast<Eigen::Index>(p)) = cplx{1.0 / r, 0.1};
      t.mask[p] = 1;
    }
  }
  const TruncationSpec spec{4.0, 6.0, 0.3, 1.2};
  const ScatteringGrid once = truncate_scattering(t, spec);
  const ScatteringGrid twice = truncate_scattering(once, spec);
  CHECK(once.values == twice.values);
  CHECK(once.mask == twice.mask);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx lambda = grid.node(p);
    const double r = std::abs(lambda);
    const double edge = spec.radius(std::arg(lambda));
    const cplx v = once.values(static_cast<Eigen::Index>(p));
    if (r >= edge || (r >= 1.0 / spec.r1 && r <= spec.r1) || r < 1.0 / edge) {
      CHECK(v == cplx{});
    } else if (r > spec.r1) {
      CHECK(v == t.values(static_cast<Eigen::Index>(p)));
    } else {
      CHECK(v == t.values(static_cast<Eigen::Index>(grid.nearest(1.0 / std::conj(lambda)))));
    }
    CHECK(once.mask[p] == (v != cplx{} ? 1 : 0));
  }
}
