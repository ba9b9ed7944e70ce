#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dbar/core.hpp"
#include "dbar/forward.hpp"
#include "dbar/green.hpp"

namespace dbar {

/// Ellipse r(θ) = √2·ab / √((b²-a²)cos(2θ-2φ) + a² + b²) and inner radius R1.
struct TruncationSpec {
  double a = 4.0;
  double b = 4.0;
  double phi = 0.0;
  double r1 = 1.05;

  double radius(double theta) const;
  double outer_radius() const { return std::max(a, b); }
  void validate() const;
};

/// t(λ) on a λ-grid. mask[i] = 1 where the value is admissible data.
struct ScatteringGrid {
  PeriodicGrid grid;
  Eigen::VectorXcd values;
  std::vector<std::uint8_t> mask;

  static ScatteringGrid zero(const PeriodicGrid& grid);
};

struct BieConfig {
  int boundary_points = 256;
  GreenConfig green{};
  /// Split off -ln|z|/2π and integrate it exactly; otherwise use the
  /// G(0) = 0 cutoff on the diagonal.
  bool log_split = true;
  double condition_limit = 1e12;
};

/// S_λ in the basis φ^{(n)}, n = -N..N.
Eigen::MatrixXcd assemble_single_layer(cplx lambda, Energy energy, int n_modes, const BieConfig& config = {});

/// S_ρ at radii ρ > 1 and the rotation rule S_λ[ℓ,n] = e^{i(n-ℓ)θ} S_|λ|[ℓ,n]
/// for λ = |λ|e^{iθ}; between radii the entries are interpolated by cubic
/// Lagrange polynomials in log ρ.
class SingleLayerTable {
 public:
  SingleLayerTable(Energy energy, int n_modes, std::vector<double> radii, const BieConfig& config = {});

  /// `count` radii spaced uniformly in log ρ on [r_min, r_max].
  static std::vector<double> log_radii(double r_min, double r_max, int count);

  Eigen::MatrixXcd at(cplx lambda) const;
  const std::vector<double>& radii() const { return radii_; }
  int n_modes() const { return n_modes_; }
  Energy energy() const { return energy_; }
  const BieConfig& config() const { return config_; }

 private:
  Energy energy_;
  int n_modes_;
  BieConfig config_;
  std::vector<double> radii_;
  std::vector<double> log_radii_;
  std::vector<Eigen::MatrixXcd> tables_;
};

struct BoundarySolution {
  Eigen::VectorXcd psi;  // Fourier coefficients of ψ|∂Ω
  double rcond = 0.0;
  bool ok = false;
};

/// Solves (I + S_λ(Lq - L0))ψ = e_λ with e_λ(θ) = exp((i√E/2)(λz̄ + z/λ)).
BoundarySolution solve_boundary_psi(const DNMatrix& lq, const DNMatrix& l0, const Eigen::MatrixXcd& s_lambda,
                                    cplx lambda, Energy energy, int boundary_points = 256,
                                    double condition_limit = 1e12);
BoundarySolution solve_boundary_psi(const DNMatrix& lq, const DNMatrix& l0, cplx lambda, Energy energy,
                                    const BieConfig& config = {});

/// t(λ) = ∫ exp((-i√E/2)(λ̄z + z̄/λ̄)) (Lq - L0)ψ ds.
cplx scattering_from_psi(const DNMatrix& lq, const DNMatrix& l0, const Eigen::VectorXcd& psi, cplx lambda,
                         Energy energy, int boundary_points = 256);

/// t at every node of `grid` with r_min < |λ| ≤ r_max. Other nodes, and nodes
/// where the boundary system is too ill-conditioned or overflows, are masked.
ScatteringGrid scattering_from_dn(const DNMatrix& lq, const DNMatrix& l0, const PeriodicGrid& grid,
                                  const SingleLayerTable& table, double r_min, double r_max);

/// The five-branch truncation: zero outside the ellipse and in the annulus
/// 1/R1 ≤ |λ| ≤ R1, t(λ) on R1 < |λ| < r(θ), and t(1/λ̄) (nearest node) on
/// 1/r(θ) ≤ |λ| < 1/R1.
ScatteringGrid truncate_scattering(const ScatteringGrid& t, const TruncationSpec& spec);

}  // namespace dbar
