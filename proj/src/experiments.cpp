#include "dbar/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/numeric/odeint.hpp>

#include "dbar/dbar.hpp"
#include "dbar/errors.hpp"

namespace dbar {

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

double disk_l2(const PeriodicGrid& grid, const Eigen::VectorXcd& f) {
  double sum = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (std::abs(grid.node(p)) < 1.0) sum += std::norm(f(static_cast<Eigen::Index>(p)));
  return std::sqrt(sum) * grid.spacing();
}

}  // namespace

std::vector<double> linspace(double a, double b, int count) {
  if (count < 1) throw InvalidArgument("linspace needs at least one point");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return v;
}

std::vector<double> radial_scattering_ls(const std::function<double(double)>& q0, const std::vector<double>& radii,
                                         Energy energy, int z_exponent, double z_half_width) {
  const PeriodicGrid grid(z_exponent, z_half_width);
  const auto field = PotentialField::sample(grid, [&](cplx z) { return cplx{q0(std::abs(z))}; });
  std::vector<double> t;
  t.reserve(radii.size());
  for (double r : radii) {
    const CGOField mu = solve_mu(field, cplx{r}, energy);
    t.push_back(scattering_direct(field, mu, energy).real());
  }
  return t;
}

ScatteringGrid radial_to_grid(const PeriodicGrid& grid, const std::vector<double>& radii,
                              const std::vector<double>& values) {
  if (radii.size() != values.size() || radii.size() < 2) throw InvalidArgument("radial profile needs >= 2 samples");
  ScatteringGrid t = ScatteringGrid::zero(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double r = std::abs(grid.node(p));
    if (r < radii.front() || r > radii.back()) continue;
    t.values(static_cast<Eigen::Index>(p)) = interpolate(radii, values, r);
    t.mask[p] = 1;
  }
  return t;
}

PeriodicGrid lambda_grid_for(const TruncationSpec& spec, const DnScatterOptions& options) {
  return PeriodicGrid(options.lambda_exponent, options.lambda_half_width_factor * spec.outer_radius());
}

ScatteringGrid scattering_grid_from_dn(const DNMatrix& lq, const DNMatrix& l0, Energy energy, double r_max,
                                       const PeriodicGrid& grid, const DnScatterOptions& options, double r1) {
  // The guard band is closed, so start the table just outside it.
  const double lo = std::max(r1, 1.0 + options.bie.green.guard_band) * (1.0 + 1e-12);
  const SingleLayerTable table(energy, lq.n_modes, SingleLayerTable::log_radii(lo, r_max, options.table_radii),
                               options.bie);
  return scattering_from_dn(lq, l0, grid, table, lo, r_max);
}

double radial_relative_l2(const std::vector<double>& r, const std::vector<double>& approx,
                          const std::vector<double>& truth) {
  if (r.size() != approx.size() || r.size() != truth.size() || r.size() < 2)
    throw InvalidArgument("radial_relative_l2: mismatched samples");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double dr = r[i] - r[i - 1];
    const auto sq = [&](std::size_t j, bool diff) {
      const double v = diff ? approx[j] - truth[j] : truth[j];
      return r[j] * v * v;
    };
    num += 0.5 * dr * (sq(i - 1, true) + sq(i, true));
    den += 0.5 * dr * (sq(i - 1, false) + sq(i, false));
  }
  return std::sqrt(num / den);
}

std::vector<double> sigma_from_radial_potential(const std::vector<double>& r, const std::vector<double>& q,
                                                double boundary_value) {
  if (r.size() != q.size() || r.empty()) throw InvalidArgument("sigma_from_radial_potential: mismatched samples");
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double r0 = 1e-4;
  const double q_origin = interpolate(r, q, 0.0);
  auto rhs = [&](const State& f, State& df, double x) {
    df[0] = f[1];
    df[1] = interpolate(r, q, x) * f[0] - f[1] / x;
  };
  // f ≈ 1 + q(0) r²/4 near the origin.
  State f{1.0 + q_origin * r0 * r0 / 4.0, q_origin * r0 / 2.0};
  std::vector<double> times{r0};
  for (double x : r)
    if (x > r0 && x < 1.0) times.push_back(x);
  times.push_back(1.0);
  std::map<double, double> sampled;
  ode::integrate_times(ode::make_dense_output(1e-11, 1e-11, ode::runge_kutta_dopri5<State>()), rhs, f, times.begin(),
                       times.end(), 1e-3, [&](const State& s, double x) { sampled[x] = s[0]; });
  const double f1 = sampled.at(1.0);
  std::vector<double> sigma;
  for (double x : r) {
    const double fx = x <= r0 ? 1.0 : x >= 1.0 ? f1 : sampled.at(x);
    sigma.push_back(boundary_value * (fx / f1) * (fx / f1));
  }
  return sigma;
}

std::vector<GreenValidationPoint> validate_green(const std::function<double(double)>& q0,
                                                 const std::vector<double>& lambda_abs, Energy energy, int z_exponent,
                                                 double d_lambda, double z_half_width) {
  const PeriodicGrid grid(z_exponent, z_half_width);
  const auto field = PotentialField::sample(grid, [&](cplx z) { return cplx{q0(std::abs(z))}; });
  const GmresOptions tight{1e-12, 400};
  auto mu_at = [&](cplx lambda) { return solve_mu(field, LsKernel(grid, lambda, energy), tight); };

  std::vector<GreenValidationPoint> out;
  for (double r : lambda_abs) {
    const cplx lambda{r};
    const CGOField mu0 = mu_at(lambda);
    const cplx t = scattering_direct(field, mu0, energy);
    const auto stencil = [&](cplx dir) {
      const Eigen::VectorXcd p1 = mu_at(lambda + dir * d_lambda).values;
      const Eigen::VectorXcd m1 = mu_at(lambda - dir * d_lambda).values;
      const Eigen::VectorXcd p2 = mu_at(lambda + 2.0 * dir * d_lambda).values;
      const Eigen::VectorXcd m2 = mu_at(lambda - 2.0 * dir * d_lambda).values;
      return Eigen::VectorXcd((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * d_lambda));
    };
    const Eigen::VectorXcd dbar_mu = 0.5 * (stencil(1.0) + I * stencil(I));
    const double sgn = r > 1.0 ? 1.0 : -1.0;
    Eigen::VectorXcd residual(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const auto i = static_cast<Eigen::Index>(p);
      const cplx z = grid.node(p);
      const cplx rhs = sgn * t / (4.0 * pi * std::conj(lambda)) * exp_factor(z, lambda, energy, ExpSign::minus) *
                       std::conj(mu0.values(i));
      residual(i) = dbar_mu(i) - rhs;
    }
    out.push_back({r, t.real(), disk_l2(grid, residual), disk_l2(grid, mu0.values)});
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> ScanResult::sign_flips(double magnitude) const {
  std::vector<std::pair<std::size_t, std::size_t>> flips;
  for (std::size_t a = 0; a < alphas.size(); ++a)
    for (std::size_t l = 0; l + 1 < lambda_abs.size(); ++l) {
      const double t0 = at(a, l).t;
      const double t1 = at(a, l + 1).t;
      if (std::isfinite(t0) && std::isfinite(t1) && t0 * t1 < 0.0 && std::abs(t0) > magnitude &&
          std::abs(t1) > magnitude)
        flips.emplace_back(a, l);
    }
  return flips;
}

namespace {

const char* kScanHeader = "alpha_index,lambda_index,alpha,lambda_abs,t,mu_max,iterations,converged,flagged";

std::map<std::pair<std::size_t, std::size_t>, ScanCell> read_checkpoint(const std::filesystem::path& path) {
  std::map<std::pair<std::size_t, std::size_t>, ScanCell> cells;
  std::ifstream in(path);
  if (!in) return cells;
  std::string line;
  std::getline(in, line);
  if (line != kScanHeader) throw InvalidArgument("checkpoint " + path.string() + " has an unexpected header");
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string c;
    std::vector<std::string> f;
    while (std::getline(ss, c, ',')) f.push_back(c);
    if (f.size() != 9) continue;  // a torn final line from an interrupted run
    ScanCell cell;
    cell.alpha = std::stod(f[2]);
    cell.lambda_abs = std::stod(f[3]);
    cell.t = std::stod(f[4]);
    cell.mu_max = std::stod(f[5]);
    cell.iterations = std::stoi(f[6]);
    cell.converged = f[7] == "1";
    cell.flagged = f[8] == "1";
    cells[{std::stoul(f[0]), std::stoul(f[1])}] = cell;
  }
  return cells;
}

}  // namespace

ScanResult scan_exceptional(const PotentialFamily& family, const std::vector<double>& alphas,
                            const std::vector<double>& lambda_abs, Energy energy, const ScanOptions& options) {
  if (alphas.empty() || lambda_abs.empty()) throw InvalidArgument("empty scan grid");
  const PeriodicGrid grid(options.z_exponent, options.z_half_width);
  ScanResult result{alphas, lambda_abs, std::vector<ScanCell>(alphas.size() * lambda_abs.size())};
  std::vector<std::uint8_t> done(result.cells.size(), 0);

  std::ofstream checkpoint;
  if (options.checkpoint) {
    for (const auto& [key, cell] : read_checkpoint(*options.checkpoint)) {
      const auto [a, l] = key;
      if (a >= alphas.size() || l >= lambda_abs.size() || cell.alpha != alphas[a] || cell.lambda_abs != lambda_abs[l])
        throw InvalidArgument("checkpoint does not match the requested scan grid");
      result.cells[a * lambda_abs.size() + l] = cell;
      done[a * lambda_abs.size() + l] = 1;
    }
    const bool fresh = !std::filesystem::exists(*options.checkpoint);
    if (options.checkpoint->has_parent_path()) std::filesystem::create_directories(options.checkpoint->parent_path());
    checkpoint.open(*options.checkpoint, std::ios::app);
    checkpoint << std::setprecision(17);
    if (fresh) checkpoint << kScanHeader << '\n' << std::flush;
  }

  std::vector<PotentialField> fields;
  fields.reserve(alphas.size());
  for (double alpha : alphas)
    fields.push_back(PotentialField::sample(grid, [&](cplx z) { return cplx{family(alpha, std::abs(z))}; }));

  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&]() {
    try {
      for (std::size_t l = next++; l < lambda_abs.size(); l = next++) {
        bool pending = false;
        for (std::size_t a = 0; a < alphas.size(); ++a) pending |= !done[a * lambda_abs.size() + l];
        if (!pending) continue;
        const LsKernel kernel(grid, cplx{lambda_abs[l]}, energy);
        std::vector<std::size_t> computed;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          const std::size_t idx = a * lambda_abs.size() + l;
          if (done[idx]) continue;
          ScanCell cell{alphas[a], lambda_abs[l]};
          try {
            const CGOField mu = solve_mu(fields[a], kernel, options.gmres);
            cell.t = scattering_direct(fields[a], mu, energy).real();
            cell.iterations = mu.iterations;
            for (std::size_t p : fields[a].support())
              cell.mu_max = std::max(cell.mu_max, std::abs(mu.values(static_cast<Eigen::Index>(p))));
            cell.flagged = !(cell.mu_max <= options.blowup_threshold) || !std::isfinite(cell.t);
          } catch (const ConvergenceFailure& e) {
            cell.t = std::numeric_limits<double>::quiet_NaN();
            cell.mu_max = std::numeric_limits<double>::infinity();
            cell.iterations = e.iterations();
            cell.converged = false;
            cell.flagged = true;
          }
          result.cells[idx] = cell;
          computed.push_back(idx);
        }
        if (checkpoint.is_open()) {
          std::lock_guard lock(write_mutex);
          for (std::size_t idx : computed) {
            const ScanCell& c = result.cells[idx];
            checkpoint << idx / lambda_abs.size() << ',' << idx % lambda_abs.size() << ',' << c.alpha << ','
                       << c.lambda_abs << ',' << c.t << ',' << c.mu_max << ',' << c.iterations << ',' << c.converged
                       << ',' << c.flagged << '\n';
          }
          checkpoint.flush();
        }
      }
    } catch (...) {
      std::lock_guard lock(write_mutex);
      if (!failure) failure = std::current_exception();
      next = lambda_abs.size();
    }
  };

  const int threads = std::max(1, options.threads);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

double Inclusion::value(cplx z) const {
  const double u = 1.0 - std::norm(z - center) / (radius * radius);
  return u > 0.0 ? amplitude * u * u * u * u : 0.0;
}

DotScene DotScene::standard() {
  DotScene scene;
  // Peaks reach the top of the typical tissue ranges: μa = 0.5, μs = 50.
  scene.absorption = {{cplx{0.35, 0.25}, 0.5, 0.4}, {cplx{-0.4, 0.3}, 0.4, 0.2}};
  scene.scattering = {{cplx{-0.3, -0.2}, 0.55, 40.0}, {cplx{0.3, -0.35}, 0.4, 20.0}};
  return scene;
}

void DotScene::validate() const {
  if (!(mu_a > 0.0) || !(mu_s > 0.0)) throw InvalidArgument("background mu_a and mu_s must be positive");
  if (!(anisotropy >= 0.0 && anisotropy < 1.0)) throw InvalidArgument("anisotropy must lie in [0, 1)");
  if (!(omega >= 0.0) || !(c_medium > 0.0)) throw InvalidArgument("omega must be >= 0 and c_medium > 0");
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
  for (const auto* set : {&absorption, &scattering})
    for (const Inclusion& inc : *set) {
      if (std::abs(inc.center) + inc.radius > 0.95)
        throw InvalidArgument("inclusions must stay inside |z| < 0.95 so the coefficients are constant near the boundary");
      if (!(inc.radius > 0.0)) throw InvalidArgument("inclusion radius must be positive");
    }
  // Coefficients must remain positive everywhere; amplitudes are summed at the
  // worst case.
  double min_a = mu_a;
  double min_s = mu_s;
  for (const Inclusion& inc : absorption) min_a += std::min(0.0, inc.amplitude);
  for (const Inclusion& inc : scattering) min_s += std::min(0.0, inc.amplitude);
  if (!(min_a > 0.0) || !(min_s > 0.0)) throw InvalidArgument("mu_a and mu_s must stay positive");
}

double DotScene::absorption_at(cplx z) const {
  double v = mu_a;
  for (const Inclusion& inc : absorption) v += inc.value(z);
  return v;
}

double DotScene::scattering_at(cplx z) const {
  double v = mu_s;
  for (const Inclusion& inc : scattering) v += inc.value(z);
  return v;
}

double DotScene::diffusion(cplx z) const {
  return 1.0 / (3.0 * (absorption_at(z) + (1.0 - anisotropy) * scattering_at(z)));
}

double DotScene::boundary_diffusion() const { return 1.0 / (3.0 * (mu_a + (1.0 - anisotropy) * mu_s)); }

double DotScene::boundary_absorption() const { return mu_a; }

Energy DotScene::energy() const {
  const double d = boundary_diffusion();
  return Energy(cplx{-mu_a / d, -omega / (d * c_medium)});
}

Energy DotScene::real_energy() const { return Energy(-mu_a / boundary_diffusion()); }

cplx DotScene::schrodinger_q(cplx z) const {
  const double d = diffusion(z);
  double lap = 0.0;
  if (std::abs(z) < 0.97) {
    const double h = fd_step;
    const auto root = [&](cplx w) { return std::sqrt(diffusion(w)); };
    lap = (root(z + h) + root(z - h) + root(z + I * h) + root(z - I * h) - 4.0 * root(z)) / (h * h);
  }
  return lap / std::sqrt(d) + cplx{absorption_at(z), omega / c_medium} / d;
}

cplx DotScene::q0(cplx z) const { return schrodinger_q(z) + energy().value(); }

double relative_l2(const std::vector<double>& approx, const std::vector<double>& truth) {
  if (approx.size() != truth.size() || approx.empty()) throw InvalidArgument("relative_l2: mismatched samples");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    num += (approx[i] - truth[i]) * (approx[i] - truth[i]);
    den += truth[i] * truth[i];
  }
  return std::sqrt(num / den);
}

DotReport dot_pipeline(const DotScene& input, const DotOptions& options) {
  DotScene scene = input;
  if (!options.use_omega) scene.omega = 0.0;
  scene.validate();
  options.truncation.validate();

  const Energy real_energy = scene.real_energy();
  // Λ_q = Λ_{D,μa}/d is simulated directly from the (possibly complex)
  // Schrödinger potential; the inversion then runs at E_re.
  const DiskMesh mesh = build_disk_mesh(rings_for_triangles(options.triangles));
  DNMatrix lq = assemble_dn([&](cplx z) { return scene.schrodinger_q(z); }, options.n_modes, mesh);
  if (options.noise > 0.0) lq = add_noise(lq, options.noise, options.seed);
  const DNMatrix l0 = dn_homogeneous(real_energy, options.n_modes);

  const PeriodicGrid grid = lambda_grid_for(options.truncation, options.scatter);
  ScatteringGrid t = scattering_grid_from_dn(lq, l0, real_energy, options.truncation.outer_radius(), grid,
                                             options.scatter, options.truncation.r1);
  ScatteringGrid truncated = truncate_scattering(t, options.truncation);
  DotReport report{scene.energy(), real_energy, scene.boundary_diffusion(), scene.boundary_absorption(), {}, {},
                   0.0, std::move(t), std::move(truncated)};

  const DbarSolver solver(report.truncated, report.real_energy);
  std::vector<cplx> nodes;
  const int n = options.z_nodes_per_axis;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cplx z{-1.0 + 2.0 * (j + 0.5) / n, -1.0 + 2.0 * (k + 0.5) / n};
      if (std::abs(z) < 1.0) nodes.push_back(z);
    }
  report.reconstruction = reconstruct_conductivity(solver, nodes, report.d, options.r_star, options.width);

  std::vector<double> rec;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!report.reconstruction.valid[i]) continue;
    rec.push_back(report.reconstruction.values[i].real());
    report.truth.push_back(scene.diffusion(nodes[i]));
  }
  if (rec.empty()) throw NumericalFailure("every D-bar solve failed in the DOT reconstruction");
  report.relative_l2 = relative_l2(rec, report.truth);
  return report;
}

}  // namespace dbar
