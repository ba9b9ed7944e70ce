#pragma once

#include <complex>
#include <cstddef>
#include <numbers>

namespace dbar {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Energy shift E of the Schrödinger potential q = q0 - E.
///
/// The inverse solvers require a real negative value. Complex values only
/// appear when simulating frequency-domain optical data.
class Energy {
 public:
  constexpr Energy() = default;
  constexpr explicit Energy(cplx value) : value_(value) {}
  constexpr explicit Energy(double value) : value_(value, 0.0) {}

  constexpr cplx value() const { return value_; }
  constexpr double real() const { return value_.real(); }
  constexpr bool is_real_negative() const { return value_.imag() == 0.0 && value_.real() < 0.0; }

  /// √E with the branch i·√|E| for real E < 0, principal branch otherwise.
  cplx sqrt() const;

  /// √|E| for real negative energies; throws otherwise.
  double kappa() const;

 private:
  cplx value_{-1.0, 0.0};
};

/// ζ ∈ ℂ² with ζ·ζ = E.
struct Zeta {
  cplx z1;
  cplx z2;
};

/// ζ = [k1, 0] + i[0, k2] after an orthogonal change of coordinates.
///
/// `angle` is arg(λ). A point z is carried into reduced coordinates by the
/// improper orthogonal map z ↦ i·conj(z)·e^{i·angle}, which sends Im ζ to the
/// positive x2-axis and Re ζ to the x1-axis (k1 carries the sign of |λ|-1).
struct ReducedZeta {
  double k1 = 0.0;
  double k2 = 0.0;
  double angle = 0.0;

  cplx to_reduced(cplx z) const { return I * std::conj(z) * std::polar(1.0, angle); }
  double energy() const { return k1 * k1 - k2 * k2; }
};

Zeta lambda_to_zeta(cplx lambda, Energy energy);

/// Inverse of lambda_to_zeta: λ = (ζ1 + iζ2)/√E.
cplx zeta_to_lambda(const Zeta& zeta, Energy energy);

/// Reduced form of ζ(λ). Requires real E < 0 and |λ| ≠ 1.
ReducedZeta reduce_zeta(cplx lambda, Energy energy);

enum class ExpSign { plus, minus };

/// e_{±λ}(z) = exp(±(i√E/2)(1 - 1/|λ|²)(-z·conj(λ) + conj(z)·λ)).
cplx exp_factor(cplx z, cplx lambda, Energy energy, ExpSign sign);

/// exp(iζ·z) = exp((i√E/2)(λ·conj(z) + z/λ)); the CGO exponential.
cplx cgo_exponential(cplx z, cplx lambda, Energy energy);

/// True when |λ| lies in [1-δ, 1+δ].
inline bool in_guard_band(cplx lambda, double delta) {
  const double r = std::abs(lambda);
  return r >= 1.0 - delta && r <= 1.0 + delta;
}

/// Uniform 2^m × 2^m grid on the square [-s, s)², node (j, k) at
/// (-s + h·j) + i(-s + h·k), stored at index j·n + k.
class PeriodicGrid {
 public:
  PeriodicGrid(int exponent, double half_width);

  int exponent() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double half_width() const { return s_; }
  double spacing() const { return h_; }

  cplx node(std::size_t j, std::size_t k) const {
    return {-s_ + h_ * static_cast<double>(j), -s_ + h_ * static_cast<double>(k)};
  }
  cplx node(std::size_t index) const { return node(index / n_, index % n_); }
  std::size_t index(std::size_t j, std::size_t k) const { return j * n_ + k; }

  /// Index of the node closest to w; the point must lie inside the square.
  std::size_t nearest(cplx w) const;

  /// Signed offset j·h for the circulant index j in [0, n) (wraps at n/2).
  double offset(std::size_t j) const {
    const auto jj = static_cast<long>(j);
    const auto nn = static_cast<long>(n_);
    return h_ * static_cast<double>(jj < nn / 2 ? jj : jj - nn);
  }

  bool operator==(const PeriodicGrid&) const = default;

 private:
  int m_;
  std::size_t n_;
  double s_;
  double h_;
};

}  // namespace dbar
