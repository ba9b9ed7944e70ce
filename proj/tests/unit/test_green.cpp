#include <doctest.h>

#include "dbar/errors.hpp"
#include "dbar/green.hpp"
#include "oracles.hpp"

using namespace dbar;

TEST_CASE("formula selection covers the three representations") {
  CHECK(select_formula(2.0, 0.0) == GreenFormula::real_axis);
  CHECK(select_formula(1.0, 3.0) == GreenFormula::upper_contour);
  CHECK(select_formula(1.0, -3.0) == GreenFormula::lower_contour);
}

TEST_CASE("green_reduced matches the Fourier oracle in every region") {
  const double k1 = 0.75;
  const double k2 = 1.25;
  const double pts[][2] = {{2, 0}, {1, 0.49}, {1, 0.51}, {1, -0.99}, {1, -1.01}, {3, 2}, {1.5, -3}, {0.5, 2}, {4, -1}};
  for (const auto& p : pts) {
    CAPTURE(p[0]);
    CAPTURE(p[1]);
    CHECK(std::abs(green_reduced(p[0], p[1], k1, k2) - oracle::green_fourier(p[0], p[1], k1, k2)) < 1e-7);
  }
}

TEST_CASE("each representation agrees with the oracle inside its domain") {
  const double k1 = -0.4;  // |λ| < 1
  const double k2 = 1.1;
  CHECK(std::abs(green_formula(GreenFormula::real_axis, 1.3, 0.2, k1, k2) - oracle::green_fourier(1.3, 0.2, k1, k2)) <
        1e-7);
  CHECK(std::abs(green_formula(GreenFormula::upper_contour, 1.3, 1.5, k1, k2) -
                 oracle::green_fourier(1.3, 1.5, k1, k2)) < 1e-7);
  CHECK(std::abs(green_formula(GreenFormula::lower_contour, 1.3, -1.5, k1, k2) -
                 oracle::green_fourier(1.3, -1.5, k1, k2)) < 1e-7);
  CHECK_THROWS_AS(green_formula(GreenFormula::upper_contour, 1.0, -1.0, k1, k2), InvalidArgument);
  CHECK_THROWS_AS(green_formula(GreenFormula::lower_contour, 1.0, 1.0, k1, k2), InvalidArgument);
}

TEST_CASE("doubling the truncation limits changes g by less than 1e-8") {
  QuadratureSpec wide;
  wide.truncation_scale = 2.0;
  const double pts[][4] = {{2, 0.1, 0.75, 1.25}, {1, 2, 0.75, 1.25}, {1.2, -2, 0.75, 1.25}, {3, -0.5, 2.4, 2.6}};
  for (const auto& p : pts) {
    const GreenFormula f = select_formula(p[0], p[1]);
    const cplx base = green_formula(f, p[0], p[1], p[2], p[3]);
    const cplx doubled = green_formula(f, p[0], p[1], p[2], p[3], wide);
    CHECK(std::abs(base - doubled) < 1e-8);
  }
}

TEST_CASE("effective lower-contour limit never undercuts the closed form") {
  for (double x2 : {-0.6, -1.0, -3.0}) {
    const double t = truncation_limit(GreenFormula::lower_contour, 1.0, x2, 0.75, 1.25);
    CHECK(effective_truncation_limit(GreenFormula::lower_contour, 1.0, x2, 0.75, 1.25) >= t);
  }
  CHECK_THROWS_AS(truncation_limits(0.0, 1.0, 0.75, 1.25), InvalidArgument);
}

TEST_CASE("scaled and switched regions agree with the oracle") {
  const Energy energy(-1.0);
  const cplx lambda{1.6, 0.9};
  const FaddeevGreen green(lambda, energy);
  // Small |z| (scaled by 100 and by 2) and points with reduced x1 < 0.
  const cplx pts[] = {{0.03, 0.02}, {0.2, -0.3}, {0.6, 0.1}, {-0.4, 0.7}, {1.5, -0.5}, {-1.2, -1.4}, {0.1, 2.0}};
  bool saw_switch = false;
  for (cplx z : pts) {
    CAPTURE(z);
    saw_switch |= green.region(z) == RegionTag::switched_x1;
    const cplx expected = oracle::green_lambda(z, lambda, -1.0);
    CHECK(std::abs(green.g(z) - expected) < 1e-6);
  }
  CHECK(saw_switch);
  CHECK(green.region(cplx{0.005, 0.0}) == RegionTag::zero_cutoff);
  CHECK(green.g(cplx{0.005, 0.0}) == cplx{});
  CHECK(green.region(cplx{0.3, 0.0}) == RegionTag::scaled_100);
  CHECK(green.region(cplx{0.7, 0.0}) == RegionTag::scaled_2);
}

TEST_CASE("G rotates with arg lambda") {
  const Energy energy(-1.0);
  const double rho = 2.3;
  const double theta = 0.7;
  const FaddeevGreen rotated(std::polar(rho, theta), energy);
  const FaddeevGreen radial(rho, energy);
  for (cplx z : {cplx{1.2, 0.3}, cplx{-0.5, 1.5}, cplx{0.7, -0.2}}) {
    const cplx a = rotated.G(z);
    const cplx b = radial.G(z * std::polar(1.0, -theta));
    CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("guard band is enforced") {
  CHECK_THROWS_AS(FaddeevGreen(cplx{1.02, 0.0}, Energy(-1.0)), GuardBandViolation);
  CHECK_THROWS_AS(FaddeevGreen(cplx{0.0, 0.97}, Energy(-1.0)), GuardBandViolation);
  CHECK_NOTHROW(FaddeevGreen(cplx{0.9, 0.0}, Energy(-1.0)));
}
