#pragma once

#include <string_view>

#include "dbar/core.hpp"

namespace dbar {

/// Composite Gauss-Legendre settings for the Green's function integrals.
/// The panel count is doubled until `target_digits` digits are stable.
struct QuadratureSpec {
  int nodes_per_panel = 16;
  int panels = 4;
  int target_digits = 8;
  int max_doublings = 10;
  /// Multiplies every truncation limit T_i. Values above 1 are only used to
  /// measure the discarded tail.
  double truncation_scale = 1.0;
};

/// Integral representations of g_ζ in reduced coordinates (x1 ≥ 0).
enum class GreenFormula {
  real_axis,      ///< t ∈ [0, T1] along the real axis; best for moderate |x2|.
  upper_contour,  ///< rotated onto the positive imaginary axis; x2 > 0.
  lower_contour,  ///< [0, 1] then down the line Re t = 1; x2 < 0.
};

enum class RegionTag {
  zero_cutoff,
  scaled_100,
  scaled_2,
  switched_x1,
  real_axis,
  upper_contour,
  lower_contour,
};

std::string_view to_string(RegionTag tag);

struct TruncationLimits {
  double t1;
  double t2;
  double t3;
};

/// Upper integration limits that keep each discarded tail below 1e-8.
/// Throws InvalidArgument when x1 ≤ 0 or c2·x1 - x2 ≤ 0.
TruncationLimits truncation_limits(double x1, double x2, double k1, double k2);

/// The single limit needed by `formula`.
double truncation_limit(GreenFormula formula, double x1, double x2, double k1, double k2);

/// Limit actually integrated to. Equals truncation_limit except for the
/// lower contour, where it is raised to max(T3, 18/|x2|) so that the
/// discarded tail stays below 1e-8.
double effective_truncation_limit(GreenFormula formula, double x1, double x2, double k1, double k2);

/// Formula used at a reduced point with x1 ≥ 0, |z| ≥ 1.
GreenFormula select_formula(double x1, double x2);

/// g_ζ(x1 + i·x2) for reduced ζ = [k1, 0] + i[0, k2], using the formula of
/// the point's region. Requires x1 ≥ 0 and |z| ≥ 1.
cplx green_reduced(double x1, double x2, double k1, double k2, const QuadratureSpec& quad = {});

/// g_ζ through a chosen representation. Throws InvalidArgument where the
/// representation does not converge (x1 ≤ 0 for real_axis, x2 ≤ 0 for
/// upper_contour, x2 ≥ 0 for lower_contour).
cplx green_formula(GreenFormula formula, double x1, double x2, double k1, double k2,
                   const QuadratureSpec& quad = {});

struct GreenConfig {
  double guard_band = 0.05;
  double zero_radius = 0.01;
  QuadratureSpec quad{};
};

/// Faddeev Green's function g_λ at fixed (λ, E) with E real negative.
///
/// Small |z| are scaled outwards using g_λ(z; E) = g_λ(az; E/a²) with a = 100
/// on [0.01, 0.5) and a = 2 on [0.5, 1); g is set to zero for |z| < 0.01.
/// Points with x1 < 0 in reduced coordinates use
/// g(-x1 + i·x2) = e^{2i·k1·x1} g(x1 + i·x2).
class FaddeevGreen {
 public:
  FaddeevGreen(cplx lambda, Energy energy, GreenConfig config = {});

  cplx g(cplx z) const;

  /// G_λ(z) = exp((i√E/2)(λ·conj(z) + z/λ)) · g_λ(z).
  cplx G(cplx z) const;

  RegionTag region(cplx z) const;

  cplx lambda() const { return lambda_; }
  Energy energy() const { return energy_; }
  const ReducedZeta& reduced() const { return reduced_; }
  const GreenConfig& config() const { return config_; }

 private:
  cplx lambda_;
  Energy energy_;
  GreenConfig config_;
  ReducedZeta reduced_;
};

cplx green_faddeev(cplx z, cplx lambda, Energy energy, const GreenConfig& config = {});
cplx green_G(cplx z, cplx lambda, Energy energy, const GreenConfig& config = {});

}  // namespace dbar
