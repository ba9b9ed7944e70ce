#include "dbar/core.hpp"

#include <algorithm>
#include <cmath>

#include "dbar/errors.hpp"

namespace dbar {

cplx Energy::sqrt() const {
  if (is_real_negative()) return {0.0, std::sqrt(-value_.real())};
  return std::sqrt(value_);
}

double Energy::kappa() const {
  if (!is_real_negative()) throw InvalidArgument("energy must be real and negative");
  return std::sqrt(-value_.real());
}

Zeta lambda_to_zeta(cplx lambda, Energy energy) {
  if (lambda == cplx{}) throw InvalidArgument("lambda must be nonzero");
  const cplx root = energy.sqrt();
  const cplx inv = 1.0 / lambda;
  return {(lambda + inv) * root / 2.0, (inv - lambda) * I * root / 2.0};
}

cplx zeta_to_lambda(const Zeta& zeta, Energy energy) {
  return (zeta.z1 + I * zeta.z2) / energy.sqrt();
}

ReducedZeta reduce_zeta(cplx lambda, Energy energy) {
  if (lambda == cplx{}) throw InvalidArgument("lambda must be nonzero");
  const double kappa = energy.kappa();
  const double rho = std::abs(lambda);
  const double k1 = kappa * (rho - 1.0 / rho) / 2.0;
  if (k1 == 0.0) throw InvalidArgument("|lambda| = 1 has no reduced form (k1 = 0)");
  return {k1, kappa * (rho + 1.0 / rho) / 2.0, std::arg(lambda)};
}

cplx exp_factor(cplx z, cplx lambda, Energy energy, ExpSign sign) {
  if (lambda == cplx{}) throw InvalidArgument("lambda must be nonzero");
  const double shrink = 1.0 - 1.0 / std::norm(lambda);
  const cplx exponent = I * energy.sqrt() / 2.0 * shrink * (-z * std::conj(lambda) + std::conj(z) * lambda);
  if (energy.is_real_negative()) {
    // The exponent is purely imaginary; drop the rounding residue of the real part.
    const double phase = exponent.imag();
    return std::polar(1.0, sign == ExpSign::plus ? phase : -phase);
  }
  return std::exp(sign == ExpSign::plus ? exponent : -exponent);
}

cplx cgo_exponential(cplx z, cplx lambda, Energy energy) {
  return std::exp(I * energy.sqrt() / 2.0 * (lambda * std::conj(z) + z / lambda));
}

PeriodicGrid::PeriodicGrid(int exponent, double half_width) : m_(exponent), s_(half_width) {
  if (exponent < 2 || exponent > 12) throw InvalidArgument("grid exponent must lie in [2, 12]");
  if (!(half_width > 0.0)) throw InvalidArgument("grid half-width must be positive");
  n_ = std::size_t{1} << exponent;
  h_ = 2.0 * s_ / static_cast<double>(n_);
}

std::size_t PeriodicGrid::nearest(cplx w) const {
  auto clamp_index = [this](double x) {
    const long j = std::lround((x + s_) / h_);
    return static_cast<std::size_t>(std::clamp(j, 0L, static_cast<long>(n_) - 1));
  };
  return index(clamp_index(w.real()), clamp_index(w.imag()));
}

}  // namespace dbar
