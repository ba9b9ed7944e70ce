// dbar: command-line front end. Every subcommand reads an optional flat
// key=value config (--config), where keys are the long flag names, and writes a
// manifest.json next to its CSV and PNG outputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "dbar/dbar.hpp"
#include "dbar/errors.hpp"
#include "dbar/experiments.hpp"
#include "dbar/green.hpp"
#include "dbar/io.hpp"

namespace fs = std::filesystem;
using namespace dbar;

namespace {

constexpr std::size_t kPublishedTriangles = 1048576;
const double nan_value = std::numeric_limits<double>::quiet_NaN();

// Options bound to variables, remembered so the effective values (after
// --paper-scale) land in the manifest.
class Keys {
 public:
  explicit Keys(CLI::App* app) : app_(app) {}
  CLI::App* app() const { return app_; }

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    refs_.push_back({name, &var});
    return app_->add_option("--" + name, var, help)->capture_default_str();
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    refs_.push_back({name.substr(0, name.find(',')), &var});
    return app_->add_flag("--" + name, var, help);
  }

  /// Fills options not given on the command line from the config file. Keys
  /// this subcommand does not know are skipped so one file can serve several.
  void apply_config() const {
    if (config_path.empty()) return;
    if (!fs::exists(config_path)) throw InvalidArgument("config file not found: " + config_path);
    std::vector<std::string> skipped;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(config_path)) {
      if (!item.parents.empty() || item.name == "config") continue;
      CLI::Option* op = app_->get_option_no_throw("--" + item.name);
      if (op == nullptr) {
        skipped.push_back(item.name);
        continue;
      }
      if (op->count() > 0) continue;
      op->add_result(item.inputs);
      op->run_callback();
    }
    if (!skipped.empty()) std::cerr << "config keys not used by " << app_->get_name() << ": " << CLI::detail::join(skipped) << '\n';
  }

  std::string config_path;

  bool given(const std::string& name) const { return app_->get_option("--" + name)->count() > 0; }

  /// Assigns `value` unless the key came from the command line or config.
  template <class T>
  void published(const std::string& name, T& var, T value) const {
    if (!given(name)) var = value;
  }

  void record(Manifest& m) const {
    m.set("config", config_path);
    for (const auto& [name, ref] : refs_)
      std::visit(
          [&](auto* p) {
            using V = std::remove_pointer_t<decltype(p)>;
            if constexpr (std::is_same_v<V, double>)
              m.set(name, *p);
            else if constexpr (std::is_same_v<V, bool>)
              m.set(name, std::string(*p ? "true" : "false"));
            else if constexpr (std::is_same_v<V, std::string>)
              m.set(name, *p);
            else
              m.set(name, static_cast<long long>(*p));
          },
          ref);
  }

 private:
  using Ref = std::variant<double*, int*, std::size_t*, unsigned long long*, bool*, std::string*>;
  CLI::App* app_;
  std::vector<std::pair<std::string, Ref>> refs_;
};

struct Common {
  std::string out = "out";
  bool paper_scale = false;
};

CLI::App* subcommand(CLI::App& app, const std::string& name, const std::string& help, Common& common, Keys*& keys,
                     std::vector<std::unique_ptr<Keys>>& owned) {
  CLI::App* sub = app.add_subcommand(name, help);
  owned.push_back(std::make_unique<Keys>(sub));
  keys = owned.back().get();
  sub->add_option("--config", keys->config_path, "flat key=value file; keys are the long flag names");
  keys->add("out", common.out, "output directory");
  keys->flag("paper-scale", common.paper_scale, "use the published problem sizes where not set explicitly");
  return sub;
}

fs::path prepare(const Common& c) {
  fs::create_directories(c.out);
  return fs::path(c.out);
}

void finish(Manifest& m, const Keys& keys, const fs::path& dir) {
  keys.record(m);
  m.write(dir / "manifest.json");
  std::cout << "wrote " << (dir / "manifest.json").string() << '\n';
}

void heatmap(Manifest& m, const fs::path& dir, const std::string& name, const Eigen::MatrixXd& values,
             const std::string& what, const HeatmapRange* range = nullptr) {
  const int scale = std::max(1, 256 / static_cast<int>(std::max(values.rows(), values.cols())));
  const HeatmapRange r = write_heatmap_png(dir / name, values, range, scale);
  m.add_heatmap(name, r);
  m.add_output(name, what);
}

// ---------------------------------------------------------------------------
// Test cases

struct CaseKeys {
  std::string name = "case1";
  double energy = -1.0;
};

void add_case_keys(Keys& k, CaseKeys& c) {
  k.add("case", c.name, "zero | case1 | case2 (potentials) | case3 | case4 (conductivities) | validation");
  k.add("energy", c.energy, "real negative energy E");
}

struct TestCase {
  std::function<double(double)> q0;
  std::optional<RadialProfile> sigma;
};

TestCase make_case(const std::string& name) {
  if (name == "zero") return {[](double) { return 0.0; }, RadialProfile{1.0, {}}};
  if (name == "validation") {
    const RadialProfile p = validation_potential();
    return {[p](double r) { return p.value(r); }, std::nullopt};
  }
  if (name == "case1" || name == "case2") {
    const RadialProfile p = case_potential(name.back() - '0');
    return {[p](double r) { return p.value(r); }, std::nullopt};
  }
  if (name == "case3" || name == "case4") {
    const RadialProfile s = case_conductivity(name.back() - '0');
    return {[s](double r) { return conductivity_potential(s, r); }, s};
  }
  throw InvalidArgument("unknown case '" + name + "'");
}

// ---------------------------------------------------------------------------
// DN data and scattering keys shared by several subcommands

struct DnKeys {
  std::string dn;  // read instead of simulating when set
  std::string method = "fem";
  std::size_t triangles = 260000;
  int n_modes = 16;
  double noise = 0.0;
  unsigned long long seed = 1;
};

void add_dn_keys(Keys& k, DnKeys& d, bool with_input, bool with_method = true) {
  if (with_input) k.add("dn", d.dn, "DN matrix CSV (from simulate-dn); simulated from --case when empty");
  if (with_method) k.add("method", d.method, "fem | radial (shooting, radial potentials only)");
  k.add("triangles", d.triangles, "approximate FEM triangle count");
  k.add("n-modes", d.n_modes, "Fourier modes N (basis n = -N..N)");
  k.add("noise", d.noise, "relative spectral-norm noise level added to the DN matrix");
  k.add("seed", d.seed, "noise seed");
}

void published_dn(const Keys& k, DnKeys& d) { k.published("triangles", d.triangles, kPublishedTriangles); }

DNMatrix obtain_dn(const DnKeys& d, const TestCase& c, Energy energy) {
  DNMatrix lq;
  if (!d.dn.empty()) {
    lq = read_dn_csv(d.dn);
  } else if (d.method == "fem") {
    const double shift = -energy.real();
    lq = assemble_dn([&](cplx z) { return cplx{c.q0(std::abs(z)) + shift}; }, d.n_modes,
                     build_disk_mesh(rings_for_triangles(d.triangles)));
  } else if (d.method == "radial") {
    const double shift = -energy.real();
    lq = dn_radial([&](double r) { return c.q0(r) + shift; }, d.n_modes);
  } else {
    throw InvalidArgument("method must be fem or radial");
  }
  if (d.noise > 0.0) lq = add_noise(lq, d.noise, d.seed);
  return lq;
}

struct ScatterKeys {
  std::string scattering;  // read instead of computing when set
  double a = 6.0;
  double b = 6.0;
  double phi = 0.0;
  double r1 = 1.05;
  int lambda_exponent = 8;
  double lambda_half_width_factor = 2.1;
  int table_radii = 32;
  int boundary_points = 128;
  double guard_band = 0.05;

  TruncationSpec spec() const { return {a, b, phi, r1}; }
  DnScatterOptions options() const {
    DnScatterOptions o;
    o.lambda_exponent = lambda_exponent;
    o.lambda_half_width_factor = lambda_half_width_factor;
    o.table_radii = table_radii;
    o.bie.boundary_points = boundary_points;
    o.bie.green.guard_band = guard_band;
    return o;
  }
};

void add_scatter_keys(Keys& k, ScatterKeys& s, bool with_input) {
  if (with_input)
    k.add("scattering", s.scattering, "scattering CSV (from scatter); computed from DN data when empty");
  k.add("a", s.a, "truncation ellipse semidiameter along phi + pi/2");
  k.add("b", s.b, "truncation ellipse semidiameter along phi");
  k.add("phi", s.phi, "truncation ellipse rotation");
  k.add("r1", s.r1, "inner truncation radius R1");
  k.add("lambda-exponent", s.lambda_exponent, "lambda grid has 2^m points per axis");
  k.add("lambda-half-width-factor", s.lambda_half_width_factor, "lambda grid half-width / outer ellipse radius");
  k.add("table-radii", s.table_radii, "radii in the single-layer interpolation table");
  k.add("boundary-points", s.boundary_points, "boundary quadrature points Nb");
  k.add("guard-band", s.guard_band, "guard band delta around |lambda| = 1");
}

ScatteringGrid obtain_scattering(const ScatterKeys& s, const DnKeys& d, const TestCase& c, Energy energy) {
  const TruncationSpec spec = s.spec();
  spec.validate();
  const PeriodicGrid grid = lambda_grid_for(spec, s.options());
  if (!s.scattering.empty()) return truncate_scattering(read_scattering_csv(s.scattering, grid), spec);
  const DNMatrix lq = obtain_dn(d, c, energy);
  const DNMatrix l0 = dn_homogeneous(energy, lq.n_modes);
  return truncate_scattering(
      scattering_grid_from_dn(lq, l0, energy, spec.outer_radius(), grid, s.options(), s.r1), spec);
}

Eigen::MatrixXd grid_image(const PeriodicGrid& grid, const std::function<double(std::size_t)>& value) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  Eigen::MatrixXd img(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      img(n - 1 - k, j) = value(grid.index(static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
  return img;
}

// Cell-centred nodes of an n×n grid on [-1, 1]² that fall inside the disk.
struct DiskNodes {
  int n = 0;
  std::vector<cplx> z;
  std::vector<std::pair<int, int>> cell;
};

DiskNodes disk_nodes(int n) {
  if (n < 1) throw InvalidArgument("z-nodes must be positive");
  DiskNodes d{n, {}, {}};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cplx z{-1.0 + 2.0 * (j + 0.5) / n, -1.0 + 2.0 * (k + 0.5) / n};
      if (std::abs(z) < 1.0) {
        d.z.push_back(z);
        d.cell.emplace_back(j, k);
      }
    }
  return d;
}

Eigen::MatrixXd disk_image(const DiskNodes& d, const std::vector<double>& values) {
  Eigen::MatrixXd img = Eigen::MatrixXd::Constant(d.n, d.n, nan_value);
  for (std::size_t i = 0; i < values.size(); ++i) img(d.n - 1 - d.cell[i].second, d.cell[i].first) = values[i];
  return img;
}

void write_field(Manifest& m, const fs::path& dir, const std::string& stem, const DiskNodes& nodes,
                 const ReconstructionResult& rec, const std::function<double(cplx)>& truth) {
  std::vector<std::vector<double>> rows;
  std::vector<double> got, want, shown;
  for (std::size_t i = 0; i < nodes.z.size(); ++i) {
    const double t = truth ? truth(nodes.z[i]) : nan_value;
    const double v = rec.valid[i] ? rec.values[i].real() : nan_value;
    rows.push_back({nodes.z[i].real(), nodes.z[i].imag(), rec.values[i].real(), rec.values[i].imag(), t,
                    rec.valid[i] ? 1.0 : 0.0});
    shown.push_back(v);
    if (rec.valid[i] && truth) {
      got.push_back(v);
      want.push_back(t);
    }
  }
  write_csv(dir / (stem + ".csv"), {"x", "y", "value_re", "value_im", "truth", "valid"}, rows);
  m.add_output(stem + ".csv", "reconstruction at disk nodes");
  for (const auto& [k, v] : rec.metadata) m.set("recon_" + k, v);
  if (!truth) {
    heatmap(m, dir, stem + ".png", disk_image(nodes, shown), "Re of the reconstruction");
    return;
  }
  std::vector<double> exact;
  for (cplx z : nodes.z) exact.push_back(truth(z));
  const Eigen::MatrixXd te = disk_image(nodes, exact);
  const Eigen::MatrixXd re = disk_image(nodes, shown);
  HeatmapRange range{exact.front(), exact.front()};
  for (const auto* vs : {&exact, &shown})
    for (double v : *vs)
      if (std::isfinite(v)) range = {std::min(range.min, v), std::max(range.max, v)};
  heatmap(m, dir, stem + ".png", re, "Re of the reconstruction", &range);
  heatmap(m, dir, stem + "_truth.png", te, "ground truth on the same colour scale", &range);
  if (!got.empty()) {
    const double e = relative_l2(got, want);
    m.set("result_relative_l2", e);
    std::printf("relative L2 error %.4f over %zu nodes\n", e, got.size());
  }
}

// ---------------------------------------------------------------------------
// Subcommands

struct GreenEvalKeys {
  double energy = -1.0;
  double lambda_re = 2.0;
  double lambda_im = 0.5;
  int grid_exponent = 6;
  double half_width = 2.0;
  double guard_band = 0.05;
  double zero_radius = 0.01;
};

void run_green_eval(const Common& c, const Keys& keys, const GreenEvalKeys& g) {
  const fs::path dir = prepare(c);
  GreenConfig cfg;
  cfg.guard_band = g.guard_band;
  cfg.zero_radius = g.zero_radius;
  const FaddeevGreen green(cplx{g.lambda_re, g.lambda_im}, Energy(g.energy), cfg);
  const PeriodicGrid grid(g.grid_exponent, g.half_width);
  std::vector<std::vector<double>> rows;
  std::vector<cplx> gv(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx z = grid.node(p);
    gv[p] = green.g(z);
    const cplx big = green.G(z);
    rows.push_back({z.real(), z.imag(), gv[p].real(), gv[p].imag(), big.real(), big.imag(),
                    static_cast<double>(green.region(z))});
  }
  Manifest m("green-eval");
  write_csv(dir / "green.csv", {"x", "y", "g_re", "g_im", "G_re", "G_im", "region"}, rows);
  m.add_output("green.csv", "g and G on the z-grid; region is the RegionTag index");
  heatmap(m, dir, "green_re.png", grid_image(grid, [&](std::size_t p) { return gv[p].real(); }), "Re g");
  heatmap(m, dir, "green_im.png", grid_image(grid, [&](std::size_t p) { return gv[p].imag(); }), "Im g");
  finish(m, keys, dir);
}

struct ValidateKeys {
  int z_exponent = 6;
  double z_half_width = 2.1;
  double d_lambda = 1e-4;
  double lambda_min = 1.06;
  double lambda_max = 30.0;
  int lambda_count = 16;
};

void run_validate_green(const Common& c, const Keys& keys, const CaseKeys& ck, const ValidateKeys& v) {
  const fs::path dir = prepare(c);
  const TestCase tc = make_case(ck.name);
  std::vector<double> lambdas;
  for (int i = 0; i < v.lambda_count; ++i)
    lambdas.push_back(v.lambda_count == 1
                          ? v.lambda_min
                          : v.lambda_min * std::pow(v.lambda_max / v.lambda_min, double(i) / (v.lambda_count - 1)));
  const auto pts = validate_green(tc.q0, lambdas, Energy(ck.energy), v.z_exponent, v.d_lambda, v.z_half_width);
  std::vector<std::vector<double>> rows;
  for (const auto& p : pts) {
    rows.push_back({p.lambda_abs, p.t, p.residual, p.mu_norm});
    std::printf("|lambda| %8.4f  t %+.6e  residual %.3e\n", p.lambda_abs, p.t, p.residual);
  }
  Manifest m("validate-green");
  write_csv(dir / "validation.csv", {"lambda_abs", "t", "residual", "mu_norm"}, rows);
  m.add_output("validation.csv", "D-bar residual of LS solutions at log-spaced real lambda");
  finish(m, keys, dir);
}

void run_simulate_dn(const Common& c, const Keys& keys, const CaseKeys& ck, const DnKeys& d) {
  const fs::path dir = prepare(c);
  const Energy energy(ck.energy);
  const DNMatrix lq = obtain_dn(d, make_case(ck.name), energy);
  const DNMatrix l0 = dn_homogeneous(energy, d.n_modes);
  Manifest m("simulate-dn");
  write_dn_csv(dir / "dn.csv", lq);
  write_dn_csv(dir / "dn_homogeneous.csv", l0);
  m.add_output("dn.csv", "DN matrix of -Delta + q0 - E");
  m.add_output("dn_homogeneous.csv", "DN matrix of -Delta - E");
  const Eigen::MatrixXd diff = (lq.entries - l0.entries).cwiseAbs().unaryExpr([](double x) {
    return std::log10(std::max(x, 1e-16));
  });
  heatmap(m, dir, "dn_difference.png", diff, "log10 |L_q - L_0| (rows l, columns n)");
  m.set("result_relative_difference", (lq.entries - l0.entries).norm() / l0.entries.norm());
  finish(m, keys, dir);
}

void scattering_outputs(Manifest& m, const fs::path& dir, const ScatteringGrid& t) {
  write_scattering_csv(dir / "scattering.csv", t);
  m.add_output("scattering.csv", "truncated t on the lambda-grid");
  auto masked = [&](auto part) {
    return grid_image(t.grid, [&, part](std::size_t p) {
      return t.mask[p] ? part(t.values(static_cast<Eigen::Index>(p))) : nan_value;
    });
  };
  heatmap(m, dir, "scattering_re.png", masked([](cplx v) { return v.real(); }), "Re t (grey outside the data)");
  heatmap(m, dir, "scattering_im.png", masked([](cplx v) { return v.imag(); }), "Im t (grey outside the data)");
  m.set("lambda_grid_half_width", t.grid.half_width());
  m.set("lambda_grid_n", static_cast<long long>(t.grid.n()));
}

void run_scatter(const Common& c, const Keys& keys, const CaseKeys& ck, const DnKeys& d, const ScatterKeys& s) {
  const fs::path dir = prepare(c);
  const ScatteringGrid t = obtain_scattering(s, d, make_case(ck.name), Energy(ck.energy));
  Manifest m("scatter");
  scattering_outputs(m, dir, t);
  finish(m, keys, dir);
}

struct ReconKeys {
  int z_nodes = 15;
  double dz = 1e-3;
  double band_fraction = 0.2;
  double r_star = 2.5;
  double width = 0.1;
  double boundary_value = 1.0;
  double gmres_tol = 1e-10;
};

void run_reconstruct(const Common& c, const Keys& keys, const CaseKeys& ck, const DnKeys& d, const ScatterKeys& s,
                     const ReconKeys& r, bool sigma) {
  const fs::path dir = prepare(c);
  const Energy energy(ck.energy);
  const TestCase tc = make_case(ck.name);
  const ScatteringGrid t = obtain_scattering(s, d, tc, energy);
  const DbarSolver solver(t, energy, GmresOptions{r.gmres_tol, 400});
  const DiskNodes nodes = disk_nodes(r.z_nodes);
  // Ground truth only makes sense when the data came from --case.
  const bool simulated = s.scattering.empty() && d.dn.empty();
  Manifest m(sigma ? "reconstruct-sigma" : "reconstruct-q");
  scattering_outputs(m, dir, t);
  if (sigma) {
    const auto rec = reconstruct_conductivity(solver, nodes.z, r.boundary_value, r.r_star, r.width);
    std::function<double(cplx)> truth;
    if (simulated && tc.sigma) truth = [p = *tc.sigma](cplx z) { return p.value(std::abs(z)); };
    write_field(m, dir, "sigma", nodes, rec, truth);
  } else {
    const auto rec = reconstruct_potential(solver, nodes.z, r.dz, outer_band_nodes(t.grid, s.spec(), r.band_fraction));
    std::function<double(cplx)> truth;
    if (simulated) truth = [q = tc.q0](cplx z) { return q(std::abs(z)); };
    write_field(m, dir, "q0", nodes, rec, truth);
  }
  finish(m, keys, dir);
}

struct ScanKeys {
  std::string family = "alpha_phi";
  double alpha_min = -35.0;
  double alpha_max = 35.0;
  int alpha_count = 71;
  double lambda_min = 1.06;
  double lambda_max = 4.5;
  int lambda_count = 50;
  int z_exponent = 8;
  double z_half_width = 2.1;
  double blowup = 1e3;
  double gmres_tol = 1e-8;
  int gmres_max_iter = 400;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string checkpoint;
  double flip_magnitude = 1e-3;
};

void run_scan(const Common& c, const Keys& keys, const CaseKeys& ck, const ScanKeys& s) {
  const fs::path dir = prepare(c);
  PotentialFamily family;
  family.kind = parse_potential_kind(s.family);
  ScanOptions opt;
  opt.z_exponent = s.z_exponent;
  opt.z_half_width = s.z_half_width;
  opt.blowup_threshold = s.blowup;
  opt.gmres = {s.gmres_tol, s.gmres_max_iter};
  opt.threads = s.threads;
  opt.checkpoint = s.checkpoint.empty() ? dir / "scan_checkpoint.csv" : fs::path(s.checkpoint);
  const auto alphas = linspace(s.alpha_min, s.alpha_max, s.alpha_count);
  const auto lambdas = linspace(s.lambda_min, s.lambda_max, s.lambda_count);
  const ScanResult res = scan_exceptional(family, alphas, lambdas, Energy(ck.energy), opt);

  std::vector<std::vector<double>> rows;
  const auto na = static_cast<Eigen::Index>(alphas.size());
  const auto nl = static_cast<Eigen::Index>(lambdas.size());
  Eigen::MatrixXd tmap(na, nl), flags(na, nl);
  long long flagged = 0;
  for (Eigen::Index a = 0; a < na; ++a)
    for (Eigen::Index l = 0; l < nl; ++l) {
      const ScanCell& cell = res.at(static_cast<std::size_t>(a), static_cast<std::size_t>(l));
      rows.push_back({cell.alpha, cell.lambda_abs, cell.t, cell.mu_max, double(cell.iterations),
                      cell.converged ? 1.0 : 0.0, cell.flagged ? 1.0 : 0.0});
      // Largest alpha on top, |lambda| increasing to the right.
      tmap(na - 1 - a, l) = std::isfinite(cell.t) ? std::copysign(std::log10(1.0 + std::abs(cell.t)), cell.t) : nan_value;
      flags(na - 1 - a, l) = cell.flagged ? 1.0 : 0.0;
      flagged += cell.flagged;
    }
  const auto flips = res.sign_flips(s.flip_magnitude);
  Manifest m("scan-exceptional");
  write_csv(dir / "scan.csv", {"alpha", "lambda_abs", "t", "mu_max", "iterations", "converged", "flagged"}, rows);
  m.add_output("scan.csv", "one row per (alpha, |lambda|) cell");
  std::vector<std::vector<double>> flip_rows;
  for (const auto& [a, l] : flips) flip_rows.push_back({alphas[a], lambdas[l]});
  write_csv(dir / "suspects.csv", {"alpha", "lambda_abs"}, flip_rows);
  m.add_output("suspects.csv", "flagged cells and sign changes of t between neighbours");
  heatmap(m, dir, "scan_t.png", tmap, "sign(t) log10(1 + |t|); rows alpha (max on top), columns |lambda|");
  heatmap(m, dir, "scan_flags.png", flags, "flagged cells");
  m.set("result_flagged_cells", flagged);
  m.set("result_suspects", static_cast<long long>(flips.size()));
  std::printf("%lld flagged cells, %zu suspects\n", flagged, flips.size());
  finish(m, keys, dir);
}

struct DotKeys {
  double mu_a = 0.1;
  double mu_s = 10.0;
  double anisotropy = 0.6;
  double omega = 1e8;
  double c_medium = 3e10;
  bool use_omega = true;
  int z_nodes = 21;
};

void run_dot(const Common& c, const Keys& keys, const DnKeys& d, const ScatterKeys& s, const ReconKeys& r,
             const DotKeys& k) {
  const fs::path dir = prepare(c);
  DotScene scene = DotScene::standard();
  scene.mu_a = k.mu_a;
  scene.mu_s = k.mu_s;
  scene.anisotropy = k.anisotropy;
  scene.omega = k.omega;
  scene.c_medium = k.c_medium;
  DotOptions opt;
  opt.truncation = s.spec();
  opt.noise = d.noise;
  opt.seed = d.seed;
  opt.triangles = d.triangles;
  opt.n_modes = d.n_modes;
  opt.scatter = s.options();
  opt.r_star = r.r_star;
  opt.width = r.width;
  opt.z_nodes_per_axis = k.z_nodes;
  opt.use_omega = k.use_omega;
  const DotReport rep = dot_pipeline(scene, opt);

  Manifest m("dot");
  m.set("result_energy_re", rep.energy.value().real());
  m.set("result_energy_im", rep.energy.value().imag());
  m.set("result_d", rep.d);
  m.set("result_m", rep.m);
  scattering_outputs(m, dir, rep.truncated);
  const DiskNodes nodes = disk_nodes(k.z_nodes);
  write_field(m, dir, "diffusion", nodes, rep.reconstruction, [&](cplx z) { return scene.diffusion(z); });
  std::printf("E = %.4f%+.4fi, D relative L2 error %.4f\n", rep.energy.value().real(), rep.energy.value().imag(),
              rep.relative_l2);
  finish(m, keys, dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D-bar inverse scattering at negative energy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());
  std::vector<std::unique_ptr<Keys>> owned;
  Common common;
  Keys* k = nullptr;

  GreenEvalKeys ge;
  CLI::App* green = subcommand(app, "green-eval", "Faddeev Green's function on a z-grid", common, k, owned);
  Keys* kg = k;
  k->add("energy", ge.energy, "real negative energy E");
  k->add("lambda-re", ge.lambda_re, "Re lambda");
  k->add("lambda-im", ge.lambda_im, "Im lambda");
  k->add("grid-exponent", ge.grid_exponent, "z-grid has 2^m points per axis");
  k->add("half-width", ge.half_width, "z-grid half-width");
  k->add("guard-band", ge.guard_band, "guard band delta around |lambda| = 1");
  k->add("zero-radius", ge.zero_radius, "g is set to zero for |z| below this");

  CaseKeys vc{"validation", -1.0};
  ValidateKeys vk;
  CLI::App* validate = subcommand(app, "validate-green", "D-bar residual check of LS solutions", common, k, owned);
  Keys* kv = k;
  add_case_keys(*k, vc);
  k->add("z-exponent", vk.z_exponent, "z-grid has 2^m points per axis");
  k->add("z-half-width", vk.z_half_width, "z-grid half-width");
  k->add("d-lambda", vk.d_lambda, "finite-difference step in lambda");
  k->add("lambda-min", vk.lambda_min, "smallest |lambda|");
  k->add("lambda-max", vk.lambda_max, "largest |lambda|");
  k->add("lambda-count", vk.lambda_count, "log-spaced |lambda| values");

  CaseKeys sc;
  DnKeys sd;
  CLI::App* simulate = subcommand(app, "simulate-dn", "DN matrix of a test case", common, k, owned);
  Keys* ks = k;
  add_case_keys(*k, sc);
  add_dn_keys(*k, sd, false);

  CaseKeys tc;
  DnKeys td;
  ScatterKeys ts;
  CLI::App* scatter = subcommand(app, "scatter", "scattering data t on the lambda-grid", common, k, owned);
  Keys* kt = k;
  add_case_keys(*k, tc);
  add_dn_keys(*k, td, true);
  add_scatter_keys(*k, ts, false);

  CaseKeys qc;
  DnKeys qd;
  ScatterKeys qs;
  ReconKeys qr;
  CLI::App* recq = subcommand(app, "reconstruct-q", "reconstruct q0 by the D-bar method", common, k, owned);
  Keys* kq = k;
  add_case_keys(*k, qc);
  add_dn_keys(*k, qd, true);
  add_scatter_keys(*k, qs, true);
  k->add("z-nodes", qr.z_nodes, "reconstruction nodes per axis on [-1, 1]");
  k->add("dz", qr.dz, "central-difference step in z");
  k->add("band-fraction", qr.band_fraction, "outer fraction of the truncation region averaged over");
  k->add("gmres-tol", qr.gmres_tol, "D-bar GMRES relative tolerance");

  CaseKeys rc{"case3", -1.0};
  DnKeys rd;
  ScatterKeys rs;
  ReconKeys rr;
  CLI::App* recs = subcommand(app, "reconstruct-sigma", "reconstruct sigma by the D-bar method", common, k, owned);
  Keys* kr = k;
  add_case_keys(*k, rc);
  add_dn_keys(*k, rd, true);
  add_scatter_keys(*k, rs, true);
  k->add("z-nodes", rr.z_nodes, "reconstruction nodes per axis on [-1, 1]");
  k->add("r-star", rr.r_star, "centre of the lambda annulus averaged over");
  k->add("width", rr.width, "half-width of the lambda annulus");
  k->add("boundary-value", rr.boundary_value, "sigma on the boundary");
  k->add("gmres-tol", rr.gmres_tol, "D-bar GMRES relative tolerance");

  CaseKeys xc;
  ScanKeys xs;
  CLI::App* scan = subcommand(app, "scan-exceptional", "scan (alpha, |lambda|) for exceptional points", common, k,
                              owned);
  Keys* kx = k;
  k->add("energy", xc.energy, "real negative energy E");
  k->add("family", xs.family, "alpha_phi | conductivity_plus_alpha_phi");
  k->add("alpha-min", xs.alpha_min, "smallest alpha");
  k->add("alpha-max", xs.alpha_max, "largest alpha");
  k->add("alpha-count", xs.alpha_count, "alpha values");
  k->add("lambda-min", xs.lambda_min, "smallest |lambda| (outside the guard band)");
  k->add("lambda-max", xs.lambda_max, "largest |lambda|");
  k->add("lambda-count", xs.lambda_count, "|lambda| values");
  k->add("z-exponent", xs.z_exponent, "z-grid has 2^m points per axis");
  k->add("z-half-width", xs.z_half_width, "z-grid half-width");
  k->add("blowup", xs.blowup, "sup |mu| above this flags a cell");
  k->add("gmres-tol", xs.gmres_tol, "LS GMRES relative tolerance");
  k->add("gmres-max-iter", xs.gmres_max_iter, "LS GMRES iteration cap");
  k->add("threads", xs.threads, "worker threads");
  k->add("checkpoint", xs.checkpoint, "checkpoint CSV (default <out>/scan_checkpoint.csv); reused on restart");
  k->add("flip-magnitude", xs.flip_magnitude, "|t| both sides of a sign change must exceed this");

  DnKeys dd;
  ScatterKeys ds;
  ds.a = 11.0;
  ds.b = 13.0;
  ds.phi = pi / 2;
  ReconKeys dr;
  DotKeys dk;
  CLI::App* dot = subcommand(app, "dot", "diffuse optical tomography reconstruction of D", common, k, owned);
  Keys* kd = k;
  add_dn_keys(*k, dd, false, false);
  add_scatter_keys(*k, ds, false);
  k->add("mu-a", dk.mu_a, "background absorption (1/cm)");
  k->add("mu-s", dk.mu_s, "background scattering (1/cm)");
  k->add("anisotropy", dk.anisotropy, "scattering anisotropy g");
  k->add("omega", dk.omega, "modulation frequency (1/s)");
  k->add("c-medium", dk.c_medium, "speed of light in the medium (cm/s)");
  k->flag("use-omega,!--no-omega", dk.use_omega, "include the frequency term in the simulated data");
  k->add("r-star", dr.r_star, "centre of the lambda annulus averaged over");
  k->add("width", dr.width, "half-width of the lambda annulus");
  k->add("z-nodes", dk.z_nodes, "reconstruction nodes per axis on [-1, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (const auto& keys : owned)
      if (keys->app()->parsed()) keys->apply_config();
    if (green->parsed()) {
      run_green_eval(common, *kg, ge);
    } else if (validate->parsed()) {
      if (common.paper_scale) kv->published("z-exponent", vk.z_exponent, 7);
      run_validate_green(common, *kv, vc, vk);
    } else if (simulate->parsed()) {
      if (common.paper_scale) published_dn(*ks, sd);
      run_simulate_dn(common, *ks, sc, sd);
    } else if (scatter->parsed()) {
      if (common.paper_scale) published_dn(*kt, td);
      run_scatter(common, *kt, tc, td, ts);
    } else if (recq->parsed()) {
      if (common.paper_scale) published_dn(*kq, qd);
      run_reconstruct(common, *kq, qc, qd, qs, qr, false);
    } else if (recs->parsed()) {
      if (common.paper_scale) published_dn(*kr, rd);
      run_reconstruct(common, *kr, rc, rd, rs, rr, true);
    } else if (scan->parsed()) {
      if (common.paper_scale) {
        kx->published("alpha-count", xs.alpha_count, 701);
        kx->published("lambda-count", xs.lambda_count, 250);
      }
      run_scan(common, *kx, xc, xs);
    } else if (dot->parsed()) {
      if (common.paper_scale) published_dn(*kd, dd);
      run_dot(common, *kd, dd, ds, dr, dk);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
