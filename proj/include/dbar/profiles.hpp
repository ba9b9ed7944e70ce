#pragma once

#include <string>
#include <vector>

#include "dbar/core.hpp"

namespace dbar {

/// a·(1 - (r/R)²)^p on r < R, zero outside. C^{p-1} at r = R.
struct Bump {
  double amplitude = 1.0;
  double radius = 1.0;
  double power = 4.0;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
};

/// Sum of bumps, with radial derivatives.
struct RadialProfile {
  double offset = 0.0;
  std::vector<Bump> bumps;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  /// f'' + f'/r, with the r → 0 limit 2f''(0).
  double laplacian(double r) const;
};

/// Δ√σ/√σ for a radial conductivity.
double conductivity_potential(const RadialProfile& sigma, double r);

/// Test cases at E = -1: Cases 1, 2 are potentials, Cases 3, 4 conductivities
/// (σ = 1 on the boundary). φ is the bump of the exceptional-point scan and
/// `scan_sigma` the conductivity of its second family.
RadialProfile case_potential(int which);
RadialProfile case_conductivity(int which);
RadialProfile scan_phi();
RadialProfile scan_sigma();

/// Radial test potential for the D-bar residual check.
RadialProfile validation_potential();

enum class PotentialKind { alpha_phi, conductivity_plus_alpha_phi };

/// q_α = αφ or q_α = Δ√σ/√σ + αφ.
struct PotentialFamily {
  PotentialKind kind = PotentialKind::alpha_phi;
  RadialProfile sigma = scan_sigma();
  RadialProfile phi = scan_phi();

  double operator()(double alpha, double r) const;
};

PotentialKind parse_potential_kind(const std::string& name);
std::string to_string(PotentialKind kind);

}  // namespace dbar
