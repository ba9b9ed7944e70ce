#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "dbar/core.hpp"

namespace dbar {

/// In-place 2D DFT of an n×n row-major array (FFTW, unnormalized).
class Fft2d {
 public:
  explicit Fft2d(std::size_t n);
  ~Fft2d();
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;

  std::size_t n() const;
  void forward(cplx* data) const;
  void backward(cplx* data) const;

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Periodic discrete convolution on a PeriodicGrid,
///   (K ⊛ f)_p = h² Σ_q K(z_p - z_q) f_q,
/// where K is sampled at the circulant offsets (grid.offset(j), grid.offset(k)).
class PeriodicConvolution {
 public:
  /// `kernel` holds K at offset index j·n + k.
  PeriodicConvolution(const PeriodicGrid& grid, const Eigen::VectorXcd& kernel);

  template <class F>
  static PeriodicConvolution from_function(const PeriodicGrid& grid, F&& kernel) {
    const std::size_t n = grid.n();
    Eigen::VectorXcd values(static_cast<Eigen::Index>(n * n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        values(static_cast<Eigen::Index>(j * n + k)) = kernel(cplx{grid.offset(j), grid.offset(k)});
    return PeriodicConvolution(grid, values);
  }

  const PeriodicGrid& grid() const { return grid_; }
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& in) const;

 private:
  PeriodicGrid grid_;
  Fft2d fft_;
  Eigen::VectorXcd symbol_;  // h²·DFT(kernel)/n²
};

}  // namespace dbar
