#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace dbar {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Supported orders: 4, 8, 10, 16, 20, 32, 64. Rules are built once and shared.
const GaussRule& gauss_legendre(int points);

struct PanelQuadrature {
  std::complex<double> value;
  int panels = 0;
  bool converged = false;
};

/// Composite Gauss-Legendre sum over the panels delimited by `breaks`.
template <class F>
std::complex<double> composite_gauss(F&& f, std::span<const double> breaks, const GaussRule& rule) {
  std::complex<double> total{};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    std::complex<double> panel{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * panel;
  }
  return total;
}

/// Splits every panel in two.
std::vector<double> bisect_panels(std::span<const double> breaks);

/// Breakpoints on [0, upper]: `panels` uniform panels, with extra panels graded
/// geometrically (ratio 2) toward zero below `knee` when knee is small.
std::vector<double> graded_breaks(double upper, int panels, double knee);

/// Doubles the panel count until two successive sums agree to `digits`
/// significant digits (absolute floor `floor`). Returns the finer sum.
template <class F>
PanelQuadrature integrate_to_digits(F&& f, std::vector<double> breaks, const GaussRule& rule, int digits,
                                    int max_doublings, double floor = 1e-2) {
  const double tol = std::pow(10.0, -digits);
  std::complex<double> coarse = composite_gauss(f, breaks, rule);
  for (int d = 0; d < max_doublings; ++d) {
    breaks = bisect_panels(breaks);
    const std::complex<double> fine = composite_gauss(f, breaks, rule);
    if (std::abs(fine - coarse) <= tol * std::max(std::abs(fine), floor))
      return {fine, static_cast<int>(breaks.size()) - 1, true};
    coarse = fine;
  }
  return {coarse, static_cast<int>(breaks.size()) - 1, false};
}

}  // namespace dbar
