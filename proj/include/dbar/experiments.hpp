#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dbar/bie.hpp"
#include "dbar/forward.hpp"
#include "dbar/ls_solver.hpp"
#include "dbar/profiles.hpp"
#include "dbar/reconstruct.hpp"

namespace dbar {

// ---------------------------------------------------------------------------
// Scattering data plumbing

/// t(|λ|) from the LS solver at real λ = radii[i] for a radial q0.
std::vector<double> radial_scattering_ls(const std::function<double(double)>& q0, const std::vector<double>& radii,
                                         Energy energy, int z_exponent = 7, double z_half_width = 2.1);

/// Linear interpolation of a radial profile onto the λ-grid; nodes outside
/// [radii.front(), radii.back()] are masked.
ScatteringGrid radial_to_grid(const PeriodicGrid& grid, const std::vector<double>& radii,
                              const std::vector<double>& values);

struct DnScatterOptions {
  int lambda_exponent = 8;
  double lambda_half_width_factor = 2.1;  // s_λ = factor · outer truncation radius
  int table_radii = 32;
  BieConfig bie{128};
};

/// S_λ table on [R1, r_max], t from the DN data on the λ-grid inside r_max.
ScatteringGrid scattering_grid_from_dn(const DNMatrix& lq, const DNMatrix& l0, Energy energy, double r_max,
                                       const PeriodicGrid& grid, const DnScatterOptions& options = {},
                                       double r1 = 1.05);

PeriodicGrid lambda_grid_for(const TruncationSpec& spec, const DnScatterOptions& options = {});

/// Relative L² error of a radial reconstruction sampled at nodes r_i, using
/// the disk weight r dr (trapezoid in r).
double radial_relative_l2(const std::vector<double>& r, const std::vector<double>& approx,
                          const std::vector<double>& truth);

/// √σ from a radial potential: f'' + f'/r = q f, f'(0) = 0, f(1)² = s.
/// `q` is sampled at increasing radii r (linear interpolation, constant
/// extrapolation); returns σ = f² at the same radii.
std::vector<double> sigma_from_radial_potential(const std::vector<double>& r, const std::vector<double>& q,
                                                double boundary_value);

// ---------------------------------------------------------------------------
// Green's function validation via the D-bar equation

struct GreenValidationPoint {
  double lambda_abs = 0.0;
  double t = 0.0;
  double residual = 0.0;  // ‖∂̄μ - t e_{-λ} conj(μ0)/(4π conj λ)‖_{L²(disk)}
  double mu_norm = 0.0;   // ‖μ0‖_{L²(disk)}
};

/// Five-point-stencil ∂̄_λ of LS solutions at real λ, shifts ±dλ, ±2dλ,
/// ±i·dλ, ±2i·dλ.
std::vector<GreenValidationPoint> validate_green(const std::function<double(double)>& q0,
                                                 const std::vector<double>& lambda_abs, Energy energy, int z_exponent,
                                                 double d_lambda = 1e-4, double z_half_width = 2.1);

// ---------------------------------------------------------------------------
// Exceptional-point scan

struct ScanOptions {
  int z_exponent = 8;
  double z_half_width = 2.1;
  double blowup_threshold = 1e3;  // ‖μ‖_∞ above this flags the cell
  GmresOptions gmres{1e-8, 400};
  int threads = 1;
  /// Rows already present in this CSV are reused; new rows are appended.
  std::optional<std::filesystem::path> checkpoint;
};

struct ScanCell {
  double alpha = 0.0;
  double lambda_abs = 0.0;
  double t = 0.0;
  double mu_max = 0.0;
  int iterations = 0;
  bool converged = true;
  bool flagged = false;
};

struct ScanResult {
  std::vector<double> alphas;
  std::vector<double> lambda_abs;
  std::vector<ScanCell> cells;  // index a·|lambda_abs| + l

  const ScanCell& at(std::size_t a, std::size_t l) const { return cells[a * lambda_abs.size() + l]; }
  /// Cells flagged by the solver or between which t changes sign with both
  /// neighbours above `magnitude` (an exceptional circle crossing).
  std::vector<std::pair<std::size_t, std::size_t>> sign_flips(double magnitude) const;
};

std::vector<double> linspace(double a, double b, int count);

ScanResult scan_exceptional(const PotentialFamily& family, const std::vector<double>& alphas,
                            const std::vector<double>& lambda_abs, Energy energy, const ScanOptions& options = {});

// ---------------------------------------------------------------------------
// Diffuse optical tomography

/// Gaussian-free smooth inclusion: amplitude·(1 - |z-c|²/R²)^4 inside the disk
/// of radius R about c.
struct Inclusion {
  cplx center;
  double radius = 0.3;
  double amplitude = 0.0;
  double value(cplx z) const;
};

struct DotScene {
  double mu_a = 0.1;   // background absorption, 1/cm
  double mu_s = 10.0;  // background scattering, 1/cm
  double anisotropy = 0.6;
  double omega = 1e8;      // 1/s
  double c_medium = 3e10;  // cm/s
  std::vector<Inclusion> absorption;
  std::vector<Inclusion> scattering;
  double fd_step = 1e-3;  // central-difference step for Δ√D

  static DotScene standard();
  void validate() const;

  double absorption_at(cplx z) const;
  double scattering_at(cplx z) const;
  double diffusion(cplx z) const;
  double boundary_diffusion() const;   // d
  double boundary_absorption() const;  // m
  /// E = -(m/d + iω/(dc)).
  Energy energy() const;
  /// E_re = -m/d, used by the real-energy inversion.
  Energy real_energy() const;
  /// q = q0 - E = Δ√D/√D + (μa + iω/c)/D.
  cplx schrodinger_q(cplx z) const;
  /// q0 = q + E.
  cplx q0(cplx z) const;
};

struct DotOptions {
  TruncationSpec truncation{11.0, 13.0, pi / 2, 1.05};
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::size_t triangles = 260000;
  int n_modes = 16;
  DnScatterOptions scatter{};
  double r_star = 2.5;
  double width = 0.1;
  int z_nodes_per_axis = 21;
  bool use_omega = true;
};

struct DotReport {
  Energy energy;
  Energy real_energy;
  double d = 0.0;
  double m = 0.0;
  ReconstructionResult reconstruction;
  std::vector<double> truth;
  double relative_l2 = 0.0;
  ScatteringGrid scattering;
  ScatteringGrid truncated;
};

DotReport dot_pipeline(const DotScene& scene, const DotOptions& options = {});

/// Relative L² error over the valid reconstruction nodes.
double relative_l2(const std::vector<double>& approx, const std::vector<double>& truth);

}  // namespace dbar
