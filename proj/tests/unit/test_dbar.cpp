#include <doctest.h>

#include "dbar/dbar.hpp"
#include "dbar/errors.hpp"
#include "oracles.hpp"

using namespace dbar;

namespace {

cplx cauchy_kernel(cplx u) { return u == cplx{} ? cplx{} : -1.0 / (pi * u); }

// Smooth compactly supported test data on 1.2 < |λ| < 2.8.
ScatteringGrid ring_data(const PeriodicGrid& grid, double amplitude) {
  ScatteringGrid t = ScatteringGrid::zero(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx l = grid.node(p);
    const double r = std::abs(l);
    if (r <= 1.2 || r >= 2.8) continue;
    const double s = (r - 1.2) * (2.8 - r);
    t.values(static_cast<Eigen::Index>(p)) = amplitude * s * s * cplx{1.0, 0.3 * std::sin(std::arg(l))};
    t.mask[p] = 1;
  }
  return t;
}

}  // namespace

TEST_CASE("Cauchy transform matches direct summation on 32x32") {
  const PeriodicGrid grid(5, 3.0);
  Eigen::VectorXcd f(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t p = 0; p < grid.size(); ++p)
    f(static_cast<Eigen::Index>(p)) = std::exp(-std::norm(grid.node(p))) * cplx{1.0, grid.node(p).imag()};
  const Eigen::VectorXcd fast = apply_cauchy(grid, f);
  const Eigen::VectorXcd slow = oracle::direct_convolution(grid, cauchy_kernel, f);
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12 * slow.cwiseAbs().maxCoeff());
}

TEST_CASE("dbar of the Cauchy transform is minus the identity") {
  const PeriodicGrid grid(8, 4.0);
  Eigen::VectorXcd f(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t p = 0; p < grid.size(); ++p) f(static_cast<Eigen::Index>(p)) = std::exp(-2.0 * std::norm(grid.node(p)));
  const Eigen::VectorXcd cf = CauchyTransform(grid).apply(f);
  const double h = grid.spacing();
  double worst = 0.0;
  for (std::size_t j = 100; j < 156; ++j)
    for (std::size_t k = 100; k < 156; ++k) {
      auto at = [&](std::size_t a, std::size_t b) { return cf(static_cast<Eigen::Index>(grid.index(a, b))); };
      const cplx dx = (at(j + 1, k) - at(j - 1, k)) / (2.0 * h);
      const cplx dy = (at(j, k + 1) - at(j, k - 1)) / (2.0 * h);
      worst = std::max(worst, std::abs(0.5 * (dx + I * dy) + f(static_cast<Eigen::Index>(grid.index(j, k)))));
    }
  CHECK(worst < 2e-2);
}

TEST_CASE("zero scattering data gives mu identically one") {
  const PeriodicGrid grid(6, 6.0);
  const DbarSolution sol = solve_dbar(ScatteringGrid::zero(grid), cplx{0.3, 0.1}, Energy(-1.0));
  CHECK((sol.mu - Eigen::VectorXcd::Ones(sol.mu.size())).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(DbarSolver(ScatteringGrid::zero(grid), Energy(cplx{-1.0, 0.1})), InvalidArgument);
}

TEST_CASE("real-split GMRES matches a dense 32x32 solve") {
  const PeriodicGrid grid(5, 3.2);
  const Energy energy(-1.0);
  const ScatteringGrid t = ring_data(grid, 4.0);
  const cplx z{0.35, -0.2};

  std::vector<std::size_t> supp;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (t.values(static_cast<Eigen::Index>(p)) != cplx{}) supp.push_back(p);
  const auto ns = static_cast<Eigen::Index>(supp.size());
  REQUIRE(ns > 50);

  // b_q = sgn(|λ|²-1) t/(4π conj λ) e_{-λ}(z), kernel h²·(-1/(π(λ_p - λ_q))) with wrap.
  const std::size_t n = grid.n();
  const double h = grid.spacing();
  auto cauchy = [&](std::size_t p, std::size_t q) {
    const std::size_t dj = (p / n + n - q / n) % n;
    const std::size_t dk = (p % n + n - q % n) % n;
    return h * h * cauchy_kernel(cplx{grid.offset(dj), grid.offset(dk)});
  };
  auto b = [&](std::size_t q) {
    const cplx l = grid.node(q);
    return t.values(static_cast<Eigen::Index>(q)) / (4.0 * pi * std::conj(l)) *
           exp_factor(z, l, energy, ExpSign::minus);
  };
  Eigen::MatrixXcd a(ns, ns);
  for (Eigen::Index i = 0; i < ns; ++i)
    for (Eigen::Index j = 0; j < ns; ++j)
      a(i, j) = cauchy(supp[static_cast<std::size_t>(i)], supp[static_cast<std::size_t>(j)]) *
                b(supp[static_cast<std::size_t>(j)]);
  Eigen::MatrixXd m(2 * ns, 2 * ns);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(ns, ns);
  m << id + a.real(), a.imag(), a.imag(), id - a.real();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * ns);
  rhs.head(ns).setOnes();
  const Eigen::VectorXd x = m.partialPivLu().solve(rhs);

  const DbarSolution sol = DbarSolver(t, energy, GmresOptions{1e-12, 400}).solve(z);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ns; ++i) {
    const cplx nu{x(i), x(ns + i)};
    worst = std::max(worst, std::abs(sol.mu(static_cast<Eigen::Index>(supp[static_cast<std::size_t>(i)])) - nu));
  }
  CHECK(worst < 1e-9);
  CHECK(sol.residual < 1e-10);
}

TEST_CASE("T carries the sign of |lambda|^2 - 1") {
  const PeriodicGrid grid(4, 2.0);
  ScatteringGrid t = ScatteringGrid::zero(grid);
  const std::size_t inner = grid.nearest(cplx{0.5, 0.25});
  const std::size_t outer = grid.nearest(cplx{1.5, 0.25});
  t.values(static_cast<Eigen::Index>(inner)) = 1.0;
  t.values(static_cast<Eigen::Index>(outer)) = 1.0;
  const Eigen::VectorXcd f = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(grid.size()));
  const Eigen::VectorXcd tf = apply_T(t, f, cplx{}, Energy(-1.0));
  const cplx li = grid.node(inner);
  const cplx lo = grid.node(outer);
  CHECK(std::abs(tf(static_cast<Eigen::Index>(inner)) + 1.0 / (4.0 * pi * std::conj(li))) < 1e-15);
  CHECK(std::abs(tf(static_cast<Eigen::Index>(outer)) - 1.0 / (4.0 * pi * std::conj(lo))) < 1e-15);
}
