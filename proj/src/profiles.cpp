#include "dbar/profiles.hpp"

#include <cmath>

#include "dbar/errors.hpp"

namespace dbar {

double Bump::value(double r) const {
  if (r >= radius) return 0.0;
  const double u = 1.0 - (r / radius) * (r / radius);
  return amplitude * std::pow(u, power);
}

double Bump::d1(double r) const {
  if (r >= radius) return 0.0;
  const double r2 = radius * radius;
  const double u = 1.0 - r * r / r2;
  return amplitude * power * std::pow(u, power - 1.0) * (-2.0 * r / r2);
}

double Bump::d2(double r) const {
  if (r >= radius) return 0.0;
  const double r2 = radius * radius;
  const double u = 1.0 - r * r / r2;
  const double first = power * std::pow(u, power - 1.0) * (-2.0 / r2);
  const double second = power * (power - 1.0) * std::pow(u, power - 2.0) * (4.0 * r * r / (r2 * r2));
  return amplitude * (first + second);
}

double RadialProfile::value(double r) const {
  double v = offset;
  for (const auto& b : bumps) v += b.value(r);
  return v;
}

double RadialProfile::d1(double r) const {
  double v = 0.0;
  for (const auto& b : bumps) v += b.d1(r);
  return v;
}

double RadialProfile::d2(double r) const {
  double v = 0.0;
  for (const auto& b : bumps) v += b.d2(r);
  return v;
}

double RadialProfile::laplacian(double r) const {
  if (r < 1e-12) return 2.0 * d2(0.0);
  return d2(r) + d1(r) / r;
}

double conductivity_potential(const RadialProfile& sigma, double r) {
  const double s = sigma.value(r);
  const double f = std::sqrt(s);
  const double f1 = sigma.d1(r) / (2.0 * f);
  const double f2 = sigma.d2(r) / (2.0 * f) - sigma.d1(r) * sigma.d1(r) / (4.0 * f * s);
  const double lap = r < 1e-12 ? 2.0 * f2 : f2 + f1 / r;
  return lap / f;
}

RadialProfile case_potential(int which) {
  switch (which) {
    case 1: return {0.0, {{3.0, 0.95, 2.0}}};
    case 2: return {0.0, {{-2.0, 1.0, 2.0}}};
  }
  throw InvalidArgument("potential cases are 1 and 2");
}

RadialProfile case_conductivity(int which) {
  switch (which) {
    case 3: return {1.0, {{0.8, 0.8, 4.0}}};
    case 4: return {1.0, {{-0.45, 0.75, 4.0}, {0.3, 0.35, 4.0}}};
  }
  throw InvalidArgument("conductivity cases are 3 and 4");
}

RadialProfile scan_phi() { return {0.0, {{1.0, 0.9, 3.0}}}; }

RadialProfile scan_sigma() { return {1.0, {{0.5, 0.9, 4.0}}}; }

RadialProfile validation_potential() { return {0.0, {{2.0, 0.7, 4.0}}}; }

double PotentialFamily::operator()(double alpha, double r) const {
  const double base = kind == PotentialKind::alpha_phi ? 0.0 : conductivity_potential(sigma, r);
  return base + alpha * phi.value(r);
}

PotentialKind parse_potential_kind(const std::string& name) {
  if (name == "alpha_phi") return PotentialKind::alpha_phi;
  if (name == "conductivity_plus_alpha_phi") return PotentialKind::conductivity_plus_alpha_phi;
  throw InvalidArgument("unknown potential family '" + name + "'");
}

std::string to_string(PotentialKind kind) {
  return kind == PotentialKind::alpha_phi ? "alpha_phi" : "conductivity_plus_alpha_phi";
}

}  // namespace dbar
