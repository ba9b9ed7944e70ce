#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dbar {

struct GmresOptions {
  double tolerance = 1e-8;  // relative to ‖b‖
  int max_iterations = 400;
};

template <class Scalar>
struct GmresResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // relative residual after each iteration
};

/// Restart-free GMRES with modified Gram-Schmidt and Givens rotations,
/// starting from x = 0.
template <class Scalar>
GmresResult<Scalar> gmres(const std::function<void(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&,
                                                   Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& apply,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, const GmresOptions& options = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = b.size();
  const int m = options.max_iterations;
  GmresResult<Scalar> out;
  out.x = Vec::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }

  std::vector<Vec> basis;
  basis.reserve(static_cast<std::size_t>(m) + 1);
  basis.push_back(b / bnorm);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h = decltype(h)::Zero(m + 1, m);
  std::vector<Scalar> cs(m), sn(m);
  Vec g = Vec::Zero(m + 1);
  g(0) = bnorm;

  int k = 0;
  Vec w(n);
  for (; k < m; ++k) {
    apply(basis[k], w);
    for (int i = 0; i <= k; ++i) {
      h(i, k) = basis[i].dot(w);  // conjugates the first argument
      w -= h(i, k) * basis[i];
    }
    const double wnorm = w.norm();
    h(k + 1, k) = wnorm;

    for (int i = 0; i < k; ++i) {
      const Scalar a = h(i, k);
      const Scalar c = h(i + 1, k);
      h(i, k) = Eigen::numext::conj(cs[i]) * a + Eigen::numext::conj(sn[i]) * c;
      h(i + 1, k) = -sn[i] * a + cs[i] * c;
    }
    const double r = std::hypot(std::abs(h(k, k)), wnorm);
    if (r == 0.0) {
      cs[k] = 1.0;
      sn[k] = 0.0;
    } else {
      cs[k] = h(k, k) / r;
      sn[k] = Scalar(wnorm / r);
    }
    h(k, k) = r;
    h(k + 1, k) = 0.0;
    g(k + 1) = -sn[k] * g(k);
    g(k) = Eigen::numext::conj(cs[k]) * g(k);

    const double rel = std::abs(g(k + 1)) / bnorm;
    out.residuals.push_back(rel);
    if (rel <= options.tolerance || wnorm == 0.0 || !std::isfinite(rel)) {
      ++k;
      out.converged = rel <= options.tolerance;
      break;
    }
    basis.push_back(w / wnorm);
  }
  out.iterations = k;
  if (k == 0) return out;

  const Vec y = h.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(g.head(k));
  for (int i = 0; i < k; ++i) out.x += y(i) * basis[i];
  return out;
}

}  // namespace dbar
