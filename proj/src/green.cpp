#include "dbar/green.hpp"

#include <cmath>
#include <string>

#include "dbar/errors.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

namespace {

constexpr double tail_exponent = 14.0;
constexpr double lower_tail_exponent = 18.0;

double c1_factor(double k1, double k2) {
  return std::cos(std::arg(std::sqrt(cplx{k1 * k1, 2.0 * std::sqrt(2.0) * std::abs(k1) * k2})));
}

double c2_factor(double k1, double k2) {
  return std::cos(std::arg(std::sqrt(cplx{1.0 - k1 * k1, 2.0 * k2})));
}

// Width in u = √t of the layer near t = 0 where w(t)² = t² - k1² + 2i·k2·t
// turns from -k1² to ~2i·k2·t.
double knee(double k1, double k2) { return std::abs(k1) / std::sqrt(2.0 * k2); }

PanelQuadrature integrate(auto&& f, double upper, double knee_width, const QuadratureSpec& quad) {
  const GaussRule& rule = gauss_legendre(quad.nodes_per_panel);
  return integrate_to_digits(f, graded_breaks(upper, quad.panels, knee_width), rule, quad.target_digits,
                             quad.max_doublings);
}

cplx real_axis(double x1, double x2, double k1, double k2, const QuadratureSpec& quad) {
  const double upper = std::sqrt(truncation_limit(GreenFormula::real_axis, x1, x2, k1, k2) * quad.truncation_scale);
  const double k1sq = k1 * k1;
  auto f = [=](double u) {
    const double t = u * u;
    const cplx w = std::sqrt(cplx{t * t - k1sq, 2.0 * k2 * t});
    return 2.0 * u * std::exp(cplx{-x1 * w.real(), x2 * t - x1 * w.imag()}) / w;
  };
  return integrate(f, upper, knee(k1, k2), quad).value.real();
}

cplx upper_contour(double x1, double x2, double k1, double k2, const QuadratureSpec& quad) {
  const double upper = std::sqrt(truncation_limit(GreenFormula::upper_contour, x1, x2, k1, k2) *
                                 quad.truncation_scale / x2);
  const double k1sq = k1 * k1;
  auto f = [=](double u) {
    const double tau = u * u;
    const double s = std::sqrt(tau * tau + 2.0 * tau * k2 + k1sq);
    return 2.0 * u * std::polar(std::exp(-x2 * tau) / s, -x1 * s);
  };
  return integrate(f, upper, knee(k1, k2), quad).value.real();
}

cplx lower_contour(double x1, double x2, double k1, double k2, const QuadratureSpec& quad) {
  const double kappa_sq = k2 * k2 - k1 * k1;
  const double k1sq = k1 * k1;
  auto head = [=](double u) {
    const double t = u * u;
    const cplx w = std::sqrt(cplx{t * t - k1sq, 2.0 * k2 * t});
    return 2.0 * u * std::exp(cplx{-x1 * w.real(), x2 * t - x1 * w.imag()}) / w;
  };
  auto tail = [=](double tau) {
    const cplx a{1.0, k2 - tau};
    const cplx v = std::sqrt(a * a + kappa_sq);
    return std::exp(x2 * tau - x1 * v) / v;
  };
  const cplx i1 = integrate(head, 1.0, knee(k1, k2), quad).value;
  const double upper = effective_truncation_limit(GreenFormula::lower_contour, x1, x2, k1, k2) * quad.truncation_scale;
  const cplx j = integrate(tail, upper, 0.0, quad).value;
  return (i1 - I * std::polar(1.0, x2) * j).real();
}

}  // namespace

std::string_view to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::zero_cutoff: return "zero_cutoff";
    case RegionTag::scaled_100: return "scaled_100";
    case RegionTag::scaled_2: return "scaled_2";
    case RegionTag::switched_x1: return "switched_x1";
    case RegionTag::real_axis: return "real_axis";
    case RegionTag::upper_contour: return "upper_contour";
    case RegionTag::lower_contour: return "lower_contour";
  }
  return "unknown";
}

double truncation_limit(GreenFormula formula, double x1, double x2, double k1, double k2) {
  switch (formula) {
    case GreenFormula::real_axis:
      if (!(x1 > 0.0)) throw InvalidArgument("T1 requires x1 > 0");
      return std::max(tail_exponent * std::sqrt(2.0) / (x1 * c1_factor(k1, k2)), std::sqrt(2.0) * std::abs(k1));
    case GreenFormula::upper_contour:
      return tail_exponent;
    case GreenFormula::lower_contour: {
      const double rate = c2_factor(k1, k2) * x1 - x2;
      if (!(rate > 0.0)) throw InvalidArgument("T3 requires c2*x1 - x2 > 0");
      return tail_exponent / rate;
    }
  }
  throw InvalidArgument("unknown formula");
}

double effective_truncation_limit(GreenFormula formula, double x1, double x2, double k1, double k2) {
  const double closed_form = truncation_limit(formula, x1, x2, k1, k2);
  if (formula != GreenFormula::lower_contour) return closed_form;
  // Along Re t = 1 the factor exp(-x1·v) tends to exp(-x1), so only e^{x2·τ}
  // decays; the closed form above leaves tails near 1e-6 for small x1.
  return std::max(closed_form, lower_tail_exponent / -x2);
}

TruncationLimits truncation_limits(double x1, double x2, double k1, double k2) {
  return {truncation_limit(GreenFormula::real_axis, x1, x2, k1, k2),
          truncation_limit(GreenFormula::upper_contour, x1, x2, k1, k2),
          truncation_limit(GreenFormula::lower_contour, x1, x2, k1, k2)};
}

GreenFormula select_formula(double x1, double x2) {
  if (x2 >= 0.5 * x1) return GreenFormula::upper_contour;
  if (x2 < -x1) return GreenFormula::lower_contour;
  return GreenFormula::real_axis;
}

cplx green_formula(GreenFormula formula, double x1, double x2, double k1, double k2, const QuadratureSpec& quad) {
  if (x1 < 0.0) throw InvalidArgument("reduced Green's function formulas need x1 >= 0");
  cplx raw;
  switch (formula) {
    case GreenFormula::real_axis:
      if (!(x1 > 0.0)) throw InvalidArgument("real-axis formula needs x1 > 0");
      raw = real_axis(x1, x2, k1, k2, quad);
      break;
    case GreenFormula::upper_contour:
      if (!(x2 > 0.0)) throw InvalidArgument("upper-contour formula needs x2 > 0");
      raw = upper_contour(x1, x2, k1, k2, quad);
      break;
    case GreenFormula::lower_contour:
      if (!(x2 < 0.0)) throw InvalidArgument("lower-contour formula needs x2 < 0");
      raw = lower_contour(x1, x2, k1, k2, quad);
      break;
  }
  return std::polar(1.0 / (2.0 * pi), -x1 * k1) * raw;
}

cplx green_reduced(double x1, double x2, double k1, double k2, const QuadratureSpec& quad) {
  if (x1 < 0.0) throw InvalidArgument("green_reduced needs x1 >= 0");
  if (std::hypot(x1, x2) < 1.0 - 1e-12) throw InvalidArgument("green_reduced needs |z| >= 1");
  return green_formula(select_formula(x1, x2), x1, x2, k1, k2, quad);
}

FaddeevGreen::FaddeevGreen(cplx lambda, Energy energy, GreenConfig config)
    : lambda_(lambda), energy_(energy), config_(config) {
  if (!energy.is_real_negative()) throw InvalidArgument("Faddeev Green's function needs real E < 0");
  if (in_guard_band(lambda, config.guard_band))
    throw GuardBandViolation("|lambda| = " + std::to_string(std::abs(lambda)) + " lies in the unit-circle guard band");
  reduced_ = reduce_zeta(lambda, energy);
}

RegionTag FaddeevGreen::region(cplx z) const {
  const double r = std::abs(z);
  if (r < config_.zero_radius) return RegionTag::zero_cutoff;
  if (r < 0.5) return RegionTag::scaled_100;
  if (r < 1.0) return RegionTag::scaled_2;
  const cplx zr = reduced_.to_reduced(z);
  if (zr.real() < 0.0) return RegionTag::switched_x1;
  switch (select_formula(zr.real(), zr.imag())) {
    case GreenFormula::real_axis: return RegionTag::real_axis;
    case GreenFormula::upper_contour: return RegionTag::upper_contour;
    case GreenFormula::lower_contour: return RegionTag::lower_contour;
  }
  return RegionTag::real_axis;
}

cplx FaddeevGreen::g(cplx z) const {
  const double r = std::abs(z);
  if (r < config_.zero_radius) return 0.0;
  const double scale = r < 0.5 ? 100.0 : (r < 1.0 ? 2.0 : 1.0);
  const cplx zr = scale * reduced_.to_reduced(z);
  const double k1 = reduced_.k1 / scale;
  const double k2 = reduced_.k2 / scale;
  double x1 = zr.real();
  const double x2 = zr.imag();
  cplx phase = 1.0;
  if (x1 < 0.0) {
    x1 = -x1;
    phase = std::polar(1.0, 2.0 * k1 * x1);
  }
  const cplx value = phase * green_formula(select_formula(x1, x2), x1, x2, k1, k2, config_.quad);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw NumericalFailure("non-finite Faddeev Green's function value", std::string(to_string(region(z))));
  return value;
}

cplx FaddeevGreen::G(cplx z) const {
  const cplx gz = g(z);
  if (gz == cplx{}) return 0.0;
  return cgo_exponential(z, lambda_, energy_) * gz;
}

cplx green_faddeev(cplx z, cplx lambda, Energy energy, const GreenConfig& config) {
  return FaddeevGreen(lambda, energy, config).g(z);
}

cplx green_G(cplx z, cplx lambda, Energy energy, const GreenConfig& config) {
  return FaddeevGreen(lambda, energy, config).G(z);
}

}  // namespace dbar
