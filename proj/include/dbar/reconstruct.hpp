#pragma once

#include <string>
#include <vector>

#include "dbar/bie.hpp"
#include "dbar/dbar.hpp"

namespace dbar {

struct ReconstructionResult {
  std::vector<cplx> z_nodes;
  std::vector<cplx> values;
  std::vector<bool> valid;
  /// Free-form description of the λ-averaging set, dz, etc. for manifests.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// λ-grid nodes with R1 + (1 - fraction)(r(θ) - R1) ≤ |λ| < r(θ).
std::vector<std::size_t> outer_band_nodes(const PeriodicGrid& grid, const TruncationSpec& spec, double fraction = 0.2);

/// λ-grid nodes with r_lo ≤ |λ| ≤ r_hi.
std::vector<std::size_t> annulus_nodes(const PeriodicGrid& grid, double r_lo, double r_hi);

/// q0(z) ≈ λ√E[(μ³-μ⁴) + i(μ¹-μ²)]/(2dz) averaged over `lambda_nodes`, with
/// μ^j = μ_R(z_j, λ) at z1,2 = z ± dz and z3,4 = z ± i·dz.
ReconstructionResult reconstruct_potential(const DbarSolver& solver, const std::vector<cplx>& z_nodes, double dz,
                                           const std::vector<std::size_t>& lambda_nodes);

/// σ(z) ≈ s · mean Re(μ_R(z, λ))² over r* - w ≤ |λ| ≤ r* + w.
ReconstructionResult reconstruct_conductivity(const DbarSolver& solver, const std::vector<cplx>& z_nodes,
                                              double boundary_value, double r_star = 2.5, double width = 0.1);

}  // namespace dbar
