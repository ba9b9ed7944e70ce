#include "dbar/reconstruct.hpp"

#include "dbar/errors.hpp"

namespace dbar {

std::vector<std::size_t> outer_band_nodes(const PeriodicGrid& grid, const TruncationSpec& spec, double fraction) {
  std::vector<std::size_t> nodes;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const cplx lambda = grid.node(p);
    const double r = std::abs(lambda);
    const double edge = spec.radius(std::arg(lambda));
    if (r >= spec.r1 + (1.0 - fraction) * (edge - spec.r1) && r < edge) nodes.push_back(p);
  }
  return nodes;
}

std::vector<std::size_t> annulus_nodes(const PeriodicGrid& grid, double r_lo, double r_hi) {
  std::vector<std::size_t> nodes;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double r = std::abs(grid.node(p));
    if (r >= r_lo && r <= r_hi) nodes.push_back(p);
  }
  return nodes;
}

ReconstructionResult reconstruct_potential(const DbarSolver& solver, const std::vector<cplx>& z_nodes, double dz,
                                           const std::vector<std::size_t>& lambda_nodes) {
  if (!(dz > 0.0)) throw InvalidArgument("dz must be positive");
  if (lambda_nodes.empty()) throw InvalidArgument("empty lambda averaging set");
  const cplx sqrt_e = solver.energy().sqrt();
  const PeriodicGrid& grid = solver.grid();

  ReconstructionResult out;
  out.metadata = {{"dz", std::to_string(dz)}, {"lambda_nodes", std::to_string(lambda_nodes.size())}};
  for (cplx z : z_nodes) {
    out.z_nodes.push_back(z);
    try {
      const DbarSolution m1 = solver.solve(z + dz);
      const DbarSolution m2 = solver.solve(z - dz);
      const DbarSolution m3 = solver.solve(z + I * dz);
      const DbarSolution m4 = solver.solve(z - I * dz);
      cplx sum{};
      for (std::size_t p : lambda_nodes) {
        const auto i = static_cast<Eigen::Index>(p);
        const cplx diff = (m3.mu(i) - m4.mu(i)) + I * (m1.mu(i) - m2.mu(i));
        sum += grid.node(p) * sqrt_e * diff / (2.0 * dz);
      }
      out.values.push_back(sum / static_cast<double>(lambda_nodes.size()));
      out.valid.push_back(true);
    } catch (const ConvergenceFailure&) {
      out.values.push_back(0.0);
      out.valid.push_back(false);
    }
  }
  return out;
}

ReconstructionResult reconstruct_conductivity(const DbarSolver& solver, const std::vector<cplx>& z_nodes,
                                              double boundary_value, double r_star, double width) {
  const std::vector<std::size_t> nodes = annulus_nodes(solver.grid(), r_star - width, r_star + width);
  if (nodes.empty()) throw InvalidArgument("no lambda nodes in the averaging annulus around r*");
  ReconstructionResult out;
  out.metadata = {{"r_star", std::to_string(r_star)},
                  {"width", std::to_string(width)},
                  {"lambda_nodes", std::to_string(nodes.size())}};
  for (cplx z : z_nodes) {
    out.z_nodes.push_back(z);
    try {
      const DbarSolution sol = solver.solve(z);
      double sum = 0.0;
      for (std::size_t p : nodes) {
        const double re = sol.mu(static_cast<Eigen::Index>(p)).real();
        sum += re * re;
      }
      out.values.push_back(boundary_value * sum / static_cast<double>(nodes.size()));
      out.valid.push_back(true);
    } catch (const ConvergenceFailure&) {
      out.values.push_back(0.0);
      out.valid.push_back(false);
    }
  }
  return out;
}

}  // namespace dbar
