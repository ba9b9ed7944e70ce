#include <doctest.h>

#include <filesystem>

#include "dbar/errors.hpp"
#include "dbar/experiments.hpp"
#include "oracles.hpp"

using namespace dbar;

TEST_CASE("linspace and radial L2") {
  CHECK(linspace(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
  const auto r = linspace(0.0, 1.0, 201);
  std::vector<double> one(r.size(), 1.0);
  std::vector<double> scaled(r.size(), 1.1);
  CHECK(radial_relative_l2(r, scaled, one) == doctest::Approx(0.1));
  CHECK(radial_relative_l2(r, one, one) == 0.0);
}

TEST_CASE("sigma from a constant potential is a Bessel profile") {
  const double k = 1.3;
  const auto r = linspace(0.0, 1.0, 21);
  const std::vector<double> q(r.size(), k * k);
  const auto sigma = sigma_from_radial_potential(r, q, 2.0);
  const double i1 = boost::math::cyl_bessel_i(0, k);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double expected = 2.0 * std::pow(boost::math::cyl_bessel_i(0, k * r[i]) / i1, 2);
    CHECK(sigma[i] == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("conductivity potential round trip") {
  const RadialProfile sigma = case_conductivity(4);
  const auto r = linspace(0.0, 1.0, 401);
  std::vector<double> q;
  for (double x : r) q.push_back(conductivity_potential(sigma, x));
  const auto back = sigma_from_radial_potential(r, q, 1.0);
  for (std::size_t i = 0; i < r.size(); i += 40) CHECK(back[i] == doctest::Approx(sigma.value(r[i])).epsilon(1e-3));
}

TEST_CASE("DOT scene arithmetic") {
  const DotScene scene = DotScene::standard();
  CHECK(scene.boundary_diffusion() == doctest::Approx(1.0 / 12.3));
  CHECK(scene.energy().value().real() == doctest::Approx(-1.23));
  CHECK(scene.energy().value().imag() == doctest::Approx(-0.041));
  CHECK(scene.real_energy().is_real_negative());
  CHECK(scene.real_energy().real() == doctest::Approx(-1.23));
  CHECK(scene.diffusion(0.99) == doctest::Approx(scene.boundary_diffusion()));

  DotScene flat;
  flat.validate();
  for (cplx z : {cplx{0.0}, cplx{0.3, -0.5}, cplx{0.9, 0.1}}) CHECK(std::abs(flat.q0(z)) < 1e-12);

  // Δ√D/√D against a halved finite-difference step.
  DotScene fine = scene;
  fine.fd_step = scene.fd_step / 2.0;
  const cplx z{-0.25, -0.15};
  CHECK(std::abs(scene.q0(z) - fine.q0(z)) < 1e-3 * std::abs(fine.q0(z)));

  DotScene bad = scene;
  bad.scattering.push_back({cplx{0.8, 0.0}, 0.3, 5.0});
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = scene;
  bad.mu_a = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("scan is deterministic, thread-independent, and resumable") {
  PotentialFamily family;
  const auto alphas = linspace(-20.0, 20.0, 3);
  const auto lambdas = linspace(1.2, 3.0, 3);
  ScanOptions opt;
  opt.z_exponent = 5;
  const ScanResult a = scan_exceptional(family, alphas, lambdas, Energy(-1.0), opt);
  opt.threads = 2;
  const ScanResult b = scan_exceptional(family, alphas, lambdas, Energy(-1.0), opt);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].t == b.cells[i].t);
    CHECK(a.cells[i].mu_max == b.cells[i].mu_max);
  }
  for (std::size_t l = 0; l < lambdas.size(); ++l) CHECK(a.at(1, l).t == 0.0);

  const auto path = std::filesystem::temp_directory_path() / "dbar_scan_checkpoint_test.csv";
  std::filesystem::remove(path);
  opt.threads = 1;
  opt.checkpoint = path;
  const ScanResult c = scan_exceptional(family, alphas, lambdas, Energy(-1.0), opt);
  const ScanResult d = scan_exceptional(family, alphas, lambdas, Energy(-1.0), opt);  // all rows reused
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(c.cells[i].t == a.cells[i].t);
    CHECK(d.cells[i].t == a.cells[i].t);
    CHECK(d.cells[i].iterations == a.cells[i].iterations);
  }
  CHECK_THROWS_AS(scan_exceptional(family, linspace(-1.0, 1.0, 3), lambdas, Energy(-1.0), opt), InvalidArgument);
  std::filesystem::remove(path);
}

TEST_CASE("sign flips are detected between neighbouring cells") {
  ScanResult r{{0.0, 1.0}, {1.0, 2.0, 3.0}, {}};
  for (double t : {1.0, -1.0, -2.0, 0.5, 0.6, 0.001}) r.cells.push_back({0.0, 0.0, t});
  const auto flips = r.sign_flips(0.1);
  REQUIRE(flips.size() == 1);
  CHECK(flips[0] == std::pair<std::size_t, std::size_t>{0, 0});
}
