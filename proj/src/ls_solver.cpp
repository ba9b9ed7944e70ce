#include "dbar/ls_solver.hpp"

#include <tuple>

#include "dbar/errors.hpp"

namespace dbar {

PotentialField PotentialField::sample(const PeriodicGrid& grid, const std::function<cplx(cplx)>& q0,
                                      double support_radius) {
  PotentialField out{grid, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size())), support_radius};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx z = grid.node(p);
    if (std::abs(z) < support_radius) out.values(static_cast<Eigen::Index>(p)) = q0(z);
  }
  return out;
}

PotentialField PotentialField::zero(const PeriodicGrid& grid, double support_radius) {
  return {grid, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size())), support_radius};
}

std::vector<std::size_t> PotentialField::support() const {
  std::vector<std::size_t> idx;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (std::abs(grid.node(p)) < support_radius) idx.push_back(p);
  return idx;
}

LsKernel::LsKernel(const PeriodicGrid& grid, cplx lambda, Energy energy, const GreenConfig& green)
    : lambda_(lambda),
      energy_(energy),
      conv_([&] {
        const FaddeevGreen g(lambda, energy, green);
        return PeriodicConvolution::from_function(grid, [&](cplx z) { return g.g(z); });
      }()) {}

std::shared_ptr<const LsKernel> LsKernelCache::get(const PeriodicGrid& grid, cplx lambda, Energy energy) {
  const auto key = std::make_tuple(lambda.real(), lambda.imag(), energy.real(), grid.exponent(), grid.half_width());
  {
    std::lock_guard lock(mutex_);
    if (auto it = kernels_.find(key); it != kernels_.end()) return it->second;
  }
  auto kernel = std::make_shared<const LsKernel>(grid, lambda, energy, green_);
  std::lock_guard lock(mutex_);
  return kernels_.emplace(key, std::move(kernel)).first->second;
}

std::size_t LsKernelCache::size() const {
  std::lock_guard lock(mutex_);
  return kernels_.size();
}

CGOField solve_mu(const PotentialField& q0, const LsKernel& kernel, const GmresOptions& options) {
  const PeriodicGrid& grid = q0.grid;
  if (!(kernel.convolution().grid() == grid)) throw InvalidArgument("kernel and potential grids differ");
  const auto n = static_cast<Eigen::Index>(grid.size());
  CGOField out{grid, kernel.lambda(), Eigen::VectorXcd::Ones(n), 0, {}};

  std::vector<std::size_t> supp;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (q0.values(static_cast<Eigen::Index>(p)) != cplx{}) supp.push_back(p);
  if (supp.empty()) return out;
  const auto ns = static_cast<Eigen::Index>(supp.size());

  Eigen::VectorXcd work(n);
  auto spread = [&](const Eigen::VectorXcd& nu) {
    work.setZero();
    for (Eigen::Index i = 0; i < ns; ++i) {
      const auto p = static_cast<Eigen::Index>(supp[static_cast<std::size_t>(i)]);
      work(p) = q0.values(p) * nu(i);
    }
    return kernel.convolve(work);
  };
  const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)> apply =
      [&](const Eigen::VectorXcd& nu, Eigen::VectorXcd& y) {
        const Eigen::VectorXcd conv = spread(nu);
        y = nu;
        for (Eigen::Index i = 0; i < ns; ++i) y(i) += conv(static_cast<Eigen::Index>(supp[static_cast<std::size_t>(i)]));
      };

  auto result = gmres<cplx>(apply, Eigen::VectorXcd::Ones(ns), options);
  out.iterations = result.iterations;
  out.residuals = result.residuals;
  if (!result.converged)
    throw ExceptionalPointSuspected("Lippmann-Schwinger GMRES did not converge at lambda = (" +
                                        std::to_string(kernel.lambda().real()) + ", " +
                                        std::to_string(kernel.lambda().imag()) + ")",
                                    result.iterations, result.residuals);
  out.values = Eigen::VectorXcd::Ones(n) - spread(result.x);
  return out;
}

CGOField solve_mu(const PotentialField& q0, cplx lambda, Energy energy, const LsOptions& options) {
  return solve_mu(q0, LsKernel(q0.grid, lambda, energy, options.green), options.gmres);
}

cplx scattering_direct(const PotentialField& q0, const CGOField& mu, Energy energy) {
  if (!(q0.grid == mu.grid)) throw InvalidArgument("potential and CGO grids differ");
  const double h = q0.grid.spacing();
  cplx sum{};
  for (std::size_t p = 0; p < q0.grid.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(p);
    if (q0.values(i) == cplx{}) continue;
    sum += exp_factor(q0.grid.node(p), mu.lambda, energy, ExpSign::plus) * q0.values(i) * mu.values(i);
  }
  return h * h * sum;
}

double ls_residual(const PotentialField& q0, const CGOField& mu, const LsKernel& kernel, double radius) {
  const Eigen::VectorXcd qmu = q0.values.cwiseProduct(mu.values);
  const Eigen::VectorXcd conv = kernel.convolve(qmu);
  double worst = 0.0;
  for (std::size_t p = 0; p < q0.grid.size(); ++p) {
    if (std::abs(q0.grid.node(p)) >= radius) continue;
    const auto i = static_cast<Eigen::Index>(p);
    worst = std::max(worst, std::abs(mu.values(i) - (1.0 - conv(i))));
  }
  return worst;
}

}  // namespace dbar
