#include "dbar/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "dbar/errors.hpp"

namespace dbar {

namespace {
// FFTW's planner is not reentrant; execution on new arrays is.
std::mutex planner_mutex;
}  // namespace

struct Fft2d::Plans {
  std::size_t n = 0;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft2d::Fft2d(std::size_t n) : plans_(std::make_unique<Plans>()) {
  plans_->n = n;
  const int ni = static_cast<int>(n);
  auto* buf = fftw_alloc_complex(n * n);
  std::lock_guard lock(planner_mutex);
  plans_->fwd = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->bwd = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!plans_->fwd || !plans_->bwd) throw NumericalFailure("FFTW planning failed");
}

Fft2d::~Fft2d() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex);
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->bwd);
}

Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

std::size_t Fft2d::n() const { return plans_->n; }

void Fft2d::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
}

void Fft2d::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd, p, p);
}

PeriodicConvolution::PeriodicConvolution(const PeriodicGrid& grid, const Eigen::VectorXcd& kernel)
    : grid_(grid), fft_(grid.n()), symbol_(kernel) {
  if (static_cast<std::size_t>(kernel.size()) != grid.size()) throw InvalidArgument("kernel size does not match grid");
  fft_.forward(symbol_.data());
  const double h = grid.spacing();
  symbol_ *= h * h / static_cast<double>(grid.size());
}

void PeriodicConvolution::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out = in;
  fft_.forward(out.data());
  out.array() *= symbol_.array();
  fft_.backward(out.data());
}

Eigen::VectorXcd PeriodicConvolution::apply(const Eigen::VectorXcd& in) const {
  Eigen::VectorXcd out;
  apply(in, out);
  return out;
}

}  // namespace dbar
