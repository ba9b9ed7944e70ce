#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dbar/bie.hpp"
#include "dbar/core.hpp"
#include "dbar/fft.hpp"
#include "dbar/krylov.hpp"

namespace dbar {

/// T f = sgn(|λ|²-1)·t(λ)/(4π·conj(λ))·e_{-λ}(z)·conj(f).
Eigen::VectorXcd apply_T(const ScatteringGrid& t, const Eigen::VectorXcd& f, cplx z, Energy energy);

/// Periodized Cauchy transform C f(λ) = (1/π)∫ f(w)/(w-λ) dw on the λ-grid,
/// i.e. convolution with -1/(πλ) (zero at the origin node). Note that
/// ∂̄C = -I with this kernel.
class CauchyTransform {
 public:
  explicit CauchyTransform(const PeriodicGrid& grid);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const { return conv_.apply(f); }
  const PeriodicGrid& grid() const { return conv_.grid(); }

 private:
  PeriodicConvolution conv_;
};

Eigen::VectorXcd apply_cauchy(const PeriodicGrid& grid, const Eigen::VectorXcd& f);

struct DbarSolution {
  cplx z;
  PeriodicGrid grid;
  Eigen::VectorXcd mu;
  int iterations = 0;
  std::vector<double> residuals;  // GMRES estimates
  double residual = 0.0;          // recomputed ‖μ - 1 + C T μ‖/‖1‖ over the grid
};

/// Solver for μ_R = 1 - C T_R μ_R at fixed t_R and varying z. The operator is
/// only real-linear, so GMRES runs on [Re μ; Im μ] restricted to supp t_R.
class DbarSolver {
 public:
  DbarSolver(const ScatteringGrid& t, Energy energy, GmresOptions gmres = {1e-10, 400});

  DbarSolution solve(cplx z) const;

  /// ‖μ - 1 + C T μ‖₂ / ‖1‖₂ on the whole grid.
  double residual(const Eigen::VectorXcd& mu, cplx z) const;

  const PeriodicGrid& grid() const { return t_.grid; }
  const ScatteringGrid& scattering() const { return t_; }
  Energy energy() const { return energy_; }

 private:
  ScatteringGrid t_;
  Energy energy_;
  GmresOptions gmres_;
  CauchyTransform cauchy_;
  std::vector<std::size_t> support_;
};

DbarSolution solve_dbar(const ScatteringGrid& t, cplx z, Energy energy, GmresOptions gmres = {1e-10, 400});

}  // namespace dbar
