#include <doctest.h>

#include <random>

#include "dbar/core.hpp"
#include "dbar/errors.hpp"

using namespace dbar;

namespace {

std::vector<cplx> sample_lambdas(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.2, 6.0);
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const double r = radius(rng);
    if (std::abs(r - 1.0) < 0.06) continue;
    out.push_back(std::polar(r, angle(rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("zeta squares to the energy and inverts back to lambda") {
  for (double e : {-1.0, -1.23, -4.0}) {
    const Energy energy(e);
    for (cplx lambda : sample_lambdas(20, 7)) {
      const Zeta z = lambda_to_zeta(lambda, energy);
      CHECK(std::abs(z.z1 * z.z1 + z.z2 * z.z2 - e) < 1e-12 * (1.0 + std::norm(lambda) + 1.0 / std::norm(lambda)));
      CHECK(std::abs(zeta_to_lambda(z, energy) - lambda) < 1e-12 * std::abs(lambda));
    }
  }
}

TEST_CASE("reduced coordinates preserve zeta.x") {
  const Energy energy(-1.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (cplx lambda : sample_lambdas(20, 11)) {
    const Zeta z = lambda_to_zeta(lambda, energy);
    const ReducedZeta r = reduce_zeta(lambda, energy);
    CHECK(r.energy() == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK((r.k1 > 0.0) == (std::abs(lambda) > 1.0));
    const cplx x{u(rng), u(rng)};
    const cplx w = r.to_reduced(x);
    const cplx full = z.z1 * x.real() + z.z2 * x.imag();
    const cplx reduced = r.k1 * w.real() + I * r.k2 * w.imag();
    CHECK(std::abs(full - reduced) < 1e-12 * (1.0 + std::abs(full)));
    CHECK(std::abs(w) == doctest::Approx(std::abs(x)));
  }
  CHECK_THROWS_AS(reduce_zeta(cplx{0.6, 0.8}, energy), InvalidArgument);
  CHECK_THROWS_AS(reduce_zeta(cplx{1.0, 0.0}, Energy(cplx{-1.0, 0.1})), InvalidArgument);
}

TEST_CASE("cgo exponential is exp(i zeta.x)") {
  const Energy energy(-1.0);
  for (cplx lambda : sample_lambdas(10, 5)) {
    const Zeta z = lambda_to_zeta(lambda, energy);
    const cplx x{0.3, -0.7};
    const cplx expected = std::exp(I * (z.z1 * x.real() + z.z2 * x.imag()));
    CHECK(std::abs(cgo_exponential(x, lambda, energy) - expected) < 1e-12 * std::abs(expected));
  }
}

TEST_CASE("e_lambda is unimodular, conjugate-symmetric, and splits the CGO exponential") {
  const Energy energy(-1.0);
  for (cplx lambda : sample_lambdas(10, 9)) {
    const cplx z{0.4, 0.55};
    const cplx plus = exp_factor(z, lambda, energy, ExpSign::plus);
    const cplx minus = exp_factor(z, lambda, energy, ExpSign::minus);
    CHECK(std::abs(plus) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(minus - std::conj(plus)) < 1e-14);
    // e^{iζz} · exp(-(i√E/2)(conj(λ) z + conj(z)/conj(λ))) = e_λ(z).
    const cplx root = energy.sqrt();
    const cplx w = std::exp(-I * root / 2.0 * (std::conj(lambda) * z + std::conj(z) / std::conj(lambda)));
    CHECK(std::abs(cgo_exponential(z, lambda, energy) * w - plus) < 1e-10);
  }
}

TEST_CASE("energy branch and guard band") {
  CHECK(Energy(-4.0).sqrt() == cplx{0.0, 2.0});
  CHECK(Energy(-4.0).kappa() == 2.0);
  CHECK_THROWS_AS(Energy(cplx{-1.0, 0.1}).kappa(), InvalidArgument);
  CHECK(in_guard_band(cplx{1.04, 0.0}, 0.05));
  CHECK(in_guard_band(cplx{0.0, 0.951}, 0.05));
  CHECK_FALSE(in_guard_band(cplx{1.06, 0.0}, 0.05));
  CHECK_THROWS_AS(lambda_to_zeta(0.0, Energy(-1.0)), InvalidArgument);
}

TEST_CASE("periodic grid layout") {
  const PeriodicGrid grid(4, 2.0);
  CHECK(grid.n() == 16);
  CHECK(grid.spacing() == doctest::Approx(0.25));
  CHECK(grid.node(0) == cplx{-2.0, -2.0});
  CHECK(grid.node(grid.index(3, 5)) == cplx{-2.0 + 0.75, -2.0 + 1.25});
  CHECK(grid.nearest(cplx{-1.2, 0.1}) == grid.index(3, 8));
  CHECK(grid.offset(0) == 0.0);
  CHECK(grid.offset(7) == doctest::Approx(1.75));
  CHECK(grid.offset(8) == doctest::Approx(-2.0));
  CHECK(grid.offset(15) == doctest::Approx(-0.25));
  CHECK_THROWS_AS(PeriodicGrid(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(PeriodicGrid(5, 0.0), InvalidArgument);
}
