#include "dbar/dbar.hpp"

#include "dbar/errors.hpp"

namespace dbar {

namespace {

cplx t_coefficient(const ScatteringGrid& t, std::size_t p, cplx z, Energy energy) {
  const cplx tv = t.values(static_cast<Eigen::Index>(p));
  if (tv == cplx{}) return 0.0;
  const cplx lambda = t.grid.node(p);
  const double r2 = std::norm(lambda);
  const double sign = r2 > 1.0 ? 1.0 : (r2 < 1.0 ? -1.0 : 0.0);
  return sign * tv / (4.0 * pi * std::conj(lambda)) * exp_factor(z, lambda, energy, ExpSign::minus);
}

}  // namespace

Eigen::VectorXcd apply_T(const ScatteringGrid& t, const Eigen::VectorXcd& f, cplx z, Energy energy) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.size());
  for (std::size_t p = 0; p < t.grid.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(p);
    out(i) = t_coefficient(t, p, z, energy) * std::conj(f(i));
  }
  return out;
}

CauchyTransform::CauchyTransform(const PeriodicGrid& grid)
    : conv_(PeriodicConvolution::from_function(grid, [](cplx u) -> cplx {
        return u == cplx{} ? cplx{} : -1.0 / (pi * u);
      })) {}

Eigen::VectorXcd apply_cauchy(const PeriodicGrid& grid, const Eigen::VectorXcd& f) {
  return CauchyTransform(grid).apply(f);
}

DbarSolver::DbarSolver(const ScatteringGrid& t, Energy energy, GmresOptions gmres)
    : t_(t), energy_(energy), gmres_(gmres), cauchy_(t.grid) {
  if (!energy.is_real_negative()) throw InvalidArgument("D-bar solver needs real E < 0");
  for (std::size_t p = 0; p < t.grid.size(); ++p)
    if (t.values(static_cast<Eigen::Index>(p)) != cplx{}) support_.push_back(p);
}

DbarSolution DbarSolver::solve(cplx z) const {
  const PeriodicGrid& grid = t_.grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  DbarSolution out{z, grid, Eigen::VectorXcd::Ones(n), 0, {}, 0.0};
  if (support_.empty()) return out;

  const auto ns = static_cast<Eigen::Index>(support_.size());
  Eigen::VectorXcd coeff(ns);
  for (Eigen::Index i = 0; i < ns; ++i) coeff(i) = t_coefficient(t_, support_[static_cast<std::size_t>(i)], z, energy_);

  Eigen::VectorXcd work(n);
  // C(b·conj(ν)) on the full grid, ν given on the support.
  auto spread = [&](const Eigen::VectorXcd& nu) {
    work.setZero();
    for (Eigen::Index i = 0; i < ns; ++i)
      work(static_cast<Eigen::Index>(support_[static_cast<std::size_t>(i)])) = coeff(i) * std::conj(nu(i));
    return cauchy_.apply(work);
  };
  const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply = [&](const Eigen::VectorXd& x,
                                                                                  Eigen::VectorXd& y) {
    const Eigen::VectorXcd nu = x.head(ns).cast<cplx>() + I * x.tail(ns).cast<cplx>();
    const Eigen::VectorXcd c = spread(nu);
    y.resize(2 * ns);
    for (Eigen::Index i = 0; i < ns; ++i) {
      const cplx v = nu(i) + c(static_cast<Eigen::Index>(support_[static_cast<std::size_t>(i)]));
      y(i) = v.real();
      y(ns + i) = v.imag();
    }
  };
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * ns);
  rhs.head(ns).setOnes();
  auto result = gmres<double>(apply, rhs, gmres_);
  out.iterations = result.iterations;
  out.residuals = result.residuals;
  if (!result.converged)
    throw ConvergenceFailure("D-bar GMRES did not converge at z = (" + std::to_string(z.real()) + ", " +
                                 std::to_string(z.imag()) + ")",
                             result.iterations, result.residuals);
  const Eigen::VectorXcd nu = result.x.head(ns).cast<cplx>() + I * result.x.tail(ns).cast<cplx>();
  out.mu = Eigen::VectorXcd::Ones(n) - spread(nu);
  out.residual = residual(out.mu, z);
  return out;
}

double DbarSolver::residual(const Eigen::VectorXcd& mu, cplx z) const {
  const Eigen::VectorXcd r = mu - Eigen::VectorXcd::Ones(mu.size()) + cauchy_.apply(apply_T(t_, mu, z, energy_));
  return r.norm() / std::sqrt(static_cast<double>(mu.size()));
}

DbarSolution solve_dbar(const ScatteringGrid& t, cplx z, Energy energy, GmresOptions gmres) {
  return DbarSolver(t, energy, gmres).solve(z);
}

}  // namespace dbar
