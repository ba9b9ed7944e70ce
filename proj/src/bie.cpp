#include "dbar/bie.hpp"

#include <algorithm>
#include <cmath>

#include "dbar/errors.hpp"

namespace dbar {

namespace {

// Columns φ^{(n)}(θ_j), n = -N..N, at θ_j = 2πj/Nb.
Eigen::MatrixXcd fourier_columns(int nb, int n_modes) {
  Eigen::MatrixXcd phi(nb, 2 * n_modes + 1);
  const double norm = 1.0 / std::sqrt(2.0 * pi);
  for (int j = 0; j < nb; ++j)
    for (int n = -n_modes; n <= n_modes; ++n) phi(j, n + n_modes) = std::polar(norm, n * 2.0 * pi * j / nb);
  return phi;
}

// lim_{z→0} G(z) + ln|z|/2π, from points at radius 0.02 in four opposite
// directions so that the O(|z| ln|z|) terms cancel.
cplx log_remainder_at_zero(const FaddeevGreen& green) {
  constexpr double r = 0.02;
  cplx sum{};
  for (cplx d : {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}}) sum += green.G(r * d);
  return sum / 4.0 + std::log(r) / (2.0 * pi);
}

}  // namespace

double TruncationSpec::radius(double theta) const {
  const double c = std::cos(2.0 * theta - 2.0 * phi);
  return std::sqrt(2.0) * a * b / std::sqrt((b * b - a * a) * c + a * a + b * b);
}

void TruncationSpec::validate() const {
  if (!(r1 > 1.0)) throw InvalidArgument("truncation R1 must exceed 1");
  if (!(a > r1 && b > r1)) throw InvalidArgument("ellipse semidiameters must exceed R1");
}

ScatteringGrid ScatteringGrid::zero(const PeriodicGrid& grid) {
  return {grid, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size())),
          std::vector<std::uint8_t>(grid.size(), 0)};
}

Eigen::MatrixXcd assemble_single_layer(cplx lambda, Energy energy, int n_modes, const BieConfig& config) {
  const int nb = config.boundary_points;
  if (nb < 2 * (2 * n_modes + 1)) throw InvalidArgument("need at least 2(2N+1) boundary points");
  const FaddeevGreen green(lambda, energy, config.green);

  std::vector<cplx> z(nb);
  for (int j = 0; j < nb; ++j) z[j] = std::polar(1.0, 2.0 * pi * j / nb);
  const cplx diagonal = config.log_split ? log_remainder_at_zero(green) : cplx{};

  Eigen::MatrixXcd kernel(nb, nb);
  for (int k = 0; k < nb; ++k) {
    for (int j = 0; j < nb; ++j) {
      if (j == k) {
        kernel(j, k) = diagonal;
        continue;
      }
      const cplx d = z[j] - z[k];
      cplx value;
      try {
        value = green.G(d);
      } catch (const NumericalFailure& e) {
        throw NumericalFailure("S_lambda entry (" + std::to_string(j) + ", " + std::to_string(k) + ") at lambda = (" +
                                   std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ")",
                               e.region());
      }
      kernel(j, k) = config.log_split ? value + std::log(std::abs(d)) / (2.0 * pi) : value;
    }
  }
  const Eigen::MatrixXcd phi = fourier_columns(nb, n_modes);
  const double w = 2.0 * pi / nb;
  Eigen::MatrixXcd s = (w * w) * (phi.adjoint() * kernel * phi);
  if (config.log_split)
    for (int n = -n_modes; n <= n_modes; ++n)
      if (n != 0) s(n + n_modes, n + n_modes) += 1.0 / (2.0 * std::abs(n));
  return s;
}

SingleLayerTable::SingleLayerTable(Energy energy, int n_modes, std::vector<double> radii, const BieConfig& config)
    : energy_(energy), n_modes_(n_modes), config_(config), radii_(std::move(radii)) {
  if (radii_.size() < 4) throw InvalidArgument("single-layer table needs at least 4 radii");
  if (!std::is_sorted(radii_.begin(), radii_.end())) throw InvalidArgument("table radii must be increasing");
  for (double r : radii_) {
    if (in_guard_band(r, config.green.guard_band) || r < 1.0)
      throw InvalidArgument("table radii must lie outside the unit disk and guard band");
    log_radii_.push_back(std::log(r));
    tables_.push_back(assemble_single_layer(r, energy, n_modes, config));
  }
}

std::vector<double> SingleLayerTable::log_radii(double r_min, double r_max, int count) {
  if (count < 2 || !(r_max > r_min)) throw InvalidArgument("bad radius range");
  std::vector<double> out(count);
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = r_min;
  out.back() = r_max;
  return out;
}

Eigen::MatrixXcd SingleLayerTable::at(cplx lambda) const {
  const double rho = std::abs(lambda);
  const double x = std::log(rho);
  constexpr double slack = 1e-12;
  if (x < log_radii_.front() - slack || x > log_radii_.back() + slack)
    throw InvalidArgument("|lambda| = " + std::to_string(rho) + " outside the single-layer table");

  const auto n = static_cast<long>(radii_.size());
  long hi = std::upper_bound(log_radii_.begin(), log_radii_.end(), x) - log_radii_.begin();
  long first = std::clamp(hi - 2, 0L, n - 4);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(tables_[0].rows(), tables_[0].cols());
  for (long i = first; i < first + 4; ++i) {
    double w = 1.0;
    for (long j = first; j < first + 4; ++j)
      if (j != i) w *= (x - log_radii_[j]) / (log_radii_[i] - log_radii_[j]);
    s += w * tables_[i];
  }
  const double theta = std::arg(lambda);
  for (int l = -n_modes_; l <= n_modes_; ++l)
    for (int m = -n_modes_; m <= n_modes_; ++m) s(l + n_modes_, m + n_modes_) *= std::polar(1.0, (m - l) * theta);
  return s;
}

BoundarySolution solve_boundary_psi(const DNMatrix& lq, const DNMatrix& l0, const Eigen::MatrixXcd& s_lambda,
                                    cplx lambda, Energy energy, int boundary_points, double condition_limit) {
  if (lq.n_modes != l0.n_modes) throw InvalidArgument("DN matrices have different N");
  const int n_modes = lq.n_modes;
  const int dim = lq.dim();
  if (s_lambda.rows() != dim) throw InvalidArgument("S_lambda size does not match the DN matrices");

  const Eigen::MatrixXcd phi = fourier_columns(boundary_points, n_modes);
  Eigen::VectorXcd e_theta(boundary_points);
  for (int j = 0; j < boundary_points; ++j)
    e_theta(j) = cgo_exponential(std::polar(1.0, 2.0 * pi * j / boundary_points), lambda, energy);
  const Eigen::VectorXcd rhs = (2.0 * pi / boundary_points) * (phi.adjoint() * e_theta);

  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(dim, dim) + s_lambda * (lq.entries - l0.entries);
  BoundarySolution out;
  if (!a.allFinite() || !rhs.allFinite()) return out;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  out.rcond = lu.rcond();
  out.psi = lu.solve(rhs);
  out.ok = out.rcond * condition_limit > 1.0 && out.psi.allFinite();
  return out;
}

BoundarySolution solve_boundary_psi(const DNMatrix& lq, const DNMatrix& l0, cplx lambda, Energy energy,
                                    const BieConfig& config) {
  const Eigen::MatrixXcd s = assemble_single_layer(lambda, energy, lq.n_modes, config);
  return solve_boundary_psi(lq, l0, s, lambda, energy, config.boundary_points, config.condition_limit);
}

cplx scattering_from_psi(const DNMatrix& lq, const DNMatrix& l0, const Eigen::VectorXcd& psi, cplx lambda,
                         Energy energy, int boundary_points) {
  const Eigen::VectorXcd c = (lq.entries - l0.entries) * psi;
  const cplx half = -I * energy.sqrt() / 2.0;
  const cplx lb = std::conj(lambda);
  const Eigen::MatrixXcd phi = fourier_columns(boundary_points, lq.n_modes);
  Eigen::VectorXcd w(boundary_points);
  for (int j = 0; j < boundary_points; ++j) {
    const cplx z = std::polar(1.0, 2.0 * pi * j / boundary_points);
    w(j) = std::exp(half * (lb * z + std::conj(z) / lb));
  }
  // Σ_n c_n ∫ w φ^{(n)} dθ
  return (2.0 * pi / boundary_points) * (w.transpose() * phi * c)(0);
}

ScatteringGrid scattering_from_dn(const DNMatrix& lq, const DNMatrix& l0, const PeriodicGrid& grid,
                                  const SingleLayerTable& table, double r_min, double r_max) {
  ScatteringGrid out = ScatteringGrid::zero(grid);
  const double lo = std::max(r_min, table.radii().front());
  const double hi = std::min(r_max, table.radii().back());
  const int nb = table.config().boundary_points;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx lambda = grid.node(p);
    const double r = std::abs(lambda);
    if (r <= lo || r > hi) continue;
    const BoundarySolution sol =
        solve_boundary_psi(lq, l0, table.at(lambda), lambda, table.energy(), nb, table.config().condition_limit);
    if (!sol.ok) continue;
    const cplx t = scattering_from_psi(lq, l0, sol.psi, lambda, table.energy(), nb);
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) continue;
    out.values(static_cast<Eigen::Index>(p)) = t;
    out.mask[p] = 1;
  }
  return out;
}

ScatteringGrid truncate_scattering(const ScatteringGrid& t, const TruncationSpec& spec) {
  spec.validate();
  const PeriodicGrid& grid = t.grid;
  // Outer branch: t(λ) on R1 < |λ| < r(θ), zero elsewhere.
  auto outer = [&](std::size_t p) -> cplx {
    const cplx lambda = grid.node(p);
    const double r = std::abs(lambda);
    if (!t.mask[p] || r <= spec.r1 || r >= spec.radius(std::arg(lambda))) return 0.0;
    return t.values(static_cast<Eigen::Index>(p));
  };
  ScatteringGrid out = ScatteringGrid::zero(grid);
  const double lo = grid.node(0, 0).real();
  const double hi = lo + grid.spacing() * static_cast<double>(grid.n() - 1);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx lambda = grid.node(p);
    const double r = std::abs(lambda);
    const double edge = spec.radius(std::arg(lambda));
    cplx value = 0.0;
    if (r > spec.r1 && r < edge) {
      value = outer(p);
    } else if (r > 0.0 && r >= 1.0 / edge && r < 1.0 / spec.r1) {
      const cplx mirror = 1.0 / std::conj(lambda);
      if (mirror.real() >= lo && mirror.real() <= hi && mirror.imag() >= lo && mirror.imag() <= hi)
        value = outer(grid.nearest(mirror));
    }
    out.values(static_cast<Eigen::Index>(p)) = value;
    out.mask[p] = value != cplx{} ? 1 : 0;
  }
  return out;
}

}  // namespace dbar
