#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dbar/core.hpp"
#include "dbar/fft.hpp"
#include "dbar/green.hpp"
#include "dbar/krylov.hpp"

namespace dbar {

/// q0 sampled on a z-grid; zero outside the disk of radius support_radius.
struct PotentialField {
  PeriodicGrid grid;
  Eigen::VectorXcd values;
  double support_radius = 1.0;

  static PotentialField sample(const PeriodicGrid& grid, const std::function<cplx(cplx)>& q0,
                               double support_radius = 1.0);
  static PotentialField zero(const PeriodicGrid& grid, double support_radius = 1.0);

  /// Grid indices with |z| < support_radius.
  std::vector<std::size_t> support() const;
};

/// μ(·, λ) on the z-grid.
struct CGOField {
  PeriodicGrid grid;
  cplx lambda;
  Eigen::VectorXcd values;
  int iterations = 0;
  std::vector<double> residuals;
};

/// Periodized g_λ sampled at every circulant offset of the z-grid, with the
/// |z| < 0.01 cutoff supplying g(0) = 0.
class LsKernel {
 public:
  LsKernel(const PeriodicGrid& grid, cplx lambda, Energy energy, const GreenConfig& green = {});

  cplx lambda() const { return lambda_; }
  Energy energy() const { return energy_; }
  const PeriodicConvolution& convolution() const { return conv_; }

  /// h² Σ g(z_p - z_q) f_q at every node p.
  Eigen::VectorXcd convolve(const Eigen::VectorXcd& f) const { return conv_.apply(f); }

 private:
  cplx lambda_;
  Energy energy_;
  PeriodicConvolution conv_;
};

/// Shares kernels across solves at the same (λ, E, grid). Thread-safe.
class LsKernelCache {
 public:
  explicit LsKernelCache(GreenConfig green = {}) : green_(green) {}
  std::shared_ptr<const LsKernel> get(const PeriodicGrid& grid, cplx lambda, Energy energy);
  std::size_t size() const;

 private:
  GreenConfig green_;
  mutable std::mutex mutex_;
  std::map<std::tuple<double, double, double, int, double>, std::shared_ptr<const LsKernel>> kernels_;
};

struct LsOptions {
  GmresOptions gmres{1e-8, 400};
  GreenConfig green{};
};

/// μ = 1 - g_λ ∗ (q0 μ), solved by GMRES on the nodes of supp(q0) and then
/// extended to the whole grid. Throws ExceptionalPointSuspected when GMRES
/// does not converge.
CGOField solve_mu(const PotentialField& q0, const LsKernel& kernel, const GmresOptions& options = {});
CGOField solve_mu(const PotentialField& q0, cplx lambda, Energy energy, const LsOptions& options = {});

/// t(λ) = h² Σ e_λ(z) q0(z) μ(z, λ).
cplx scattering_direct(const PotentialField& q0, const CGOField& mu, Energy energy);

/// ‖μ - (1 - g∗(q0 μ))‖_∞ over the nodes with |z| < radius.
double ls_residual(const PotentialField& q0, const CGOField& mu, const LsKernel& kernel, double radius = 1.0);

}  // namespace dbar
