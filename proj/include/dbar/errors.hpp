#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dbar {

/// Precondition violated by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// |λ| falls inside the band around the unit circle where g_λ is not evaluated.
class GuardBandViolation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A quadrature or linear solve produced a non-finite or unusable value.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::string region)
      : std::runtime_error(what + " [region: " + region + "]"), region_(std::move(region)) {}
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}

  const std::string& region() const noexcept { return region_; }

 private:
  std::string region_;
};

/// The boundary value problem (-Δ+q)u = 0, u|∂Ω = f has no unique solution.
class WellPosednessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// GMRES did not reach its tolerance. For the Lippmann-Schwinger system this
/// is the signal used to flag a suspected exceptional point.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, int iterations, std::vector<double> residuals)
      : std::runtime_error(what), iterations_(iterations), residuals_(std::move(residuals)) {}

  int iterations() const noexcept { return iterations_; }
  const std::vector<double>& residual_history() const noexcept { return residuals_; }

 private:
  int iterations_;
  std::vector<double> residuals_;
};

class ExceptionalPointSuspected : public ConvergenceFailure {
 public:
  using ConvergenceFailure::ConvergenceFailure;
};

}  // namespace dbar
