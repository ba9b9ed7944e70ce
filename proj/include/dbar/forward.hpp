#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dbar/core.hpp"

namespace dbar {

/// DN map in the basis φ^{(n)}(θ) = e^{inθ}/√(2π), n = -N..N. Entry (ℓ, n)
/// sits at (ℓ+N, n+N).
struct DNMatrix {
  int n_modes = 0;
  Eigen::MatrixXcd entries;

  int dim() const { return 2 * n_modes + 1; }
  cplx operator()(int l, int n) const { return entries(l + n_modes, n + n_modes); }
};

/// P1 triangulation of the unit disk. Ring i (i = 1..rings) carries 6i nodes
/// at radius i/rings, neighbouring rings are zipped by angle, giving
/// 6·rings² triangles. Boundary nodes are the last ring, ordered by angle.
struct DiskMesh {
  std::vector<cplx> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;  // ccw from θ = 0
  int rings = 0;

  std::size_t triangle_count() const { return triangles.size(); }
};

DiskMesh build_disk_mesh(int rings);

/// Ring count whose mesh has about `triangles` triangles.
int rings_for_triangles(std::size_t triangles);

/// DN matrix of -Δ + q on the unit disk, q = q0 - E, with the flux of each
/// column taken weakly through the assembled (unconstrained) FEM operator.
/// Complex q is allowed. Throws WellPosednessViolation if the Dirichlet
/// problem cannot be solved.
DNMatrix assemble_dn(const std::function<cplx(cplx)>& q, int n_modes, const DiskMesh& mesh);

/// Diagonal DN matrix of q = -E: √(-E)·I_n'(√(-E))/I_n(√(-E)).
DNMatrix dn_homogeneous(Energy energy, int n_modes);

/// DN eigenvalue u_n'(1)/u_n(1) of u'' + u'/r - (n²/r² + q(r))u = 0, by
/// adaptive Runge-Kutta shooting from the regular series at small r.
double dn_radial_mode(const std::function<double(double)>& q, int n);
DNMatrix dn_radial(const std::function<double(double)>& q, int n_modes);

/// L + c·G with G real i.i.d. N(0,1) (std::mt19937_64 seeded with `seed`) and
/// c chosen so that ‖L^ε - L‖₂/‖L‖₂ = target_rel.
DNMatrix add_noise(const DNMatrix& dn, double target_rel, std::uint64_t seed);

/// Spectral norm.
double spectral_norm(const Eigen::MatrixXcd& m);

}  // namespace dbar
