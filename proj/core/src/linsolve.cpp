#include "orthopt/linsolve.hpp"

#include <cmath>
#include <string>

namespace orthopt {

namespace {

bool try_cholesky(const SquareSymmetric& a, DenseMatrix& l) {
  const std::int64_t n = a.order();
  l = DenseMatrix(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::int64_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::int64_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::int64_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return true;
}

}  // namespace

LinearSolver::LinearSolver(const SquareSymmetric& a) {
  const std::int64_t n = a.order();
  if (try_cholesky(a, f_)) {
    spd_ = true;
    return;
  }
  // LU with partial pivoting on a dense copy.
  f_ = a.matrix();
  perm_.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
  double scale = 0.0;
  for (double v : f_.values()) scale = std::max(scale, std::abs(v));
  const double floor = 1e-14 * std::max(scale, 1e-300);
  for (std::int64_t k = 0; k < n; ++k) {
    std::int64_t piv = k;
    double best = std::abs(f_(k, k));
    for (std::int64_t i = k + 1; i < n; ++i) {
      const double v = std::abs(f_(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (!(best > floor))
      throw generation_error("LinearSolver: matrix is numerically singular (pivot " +
                             std::to_string(best) + " at column " + std::to_string(k) + ")");
    if (piv != k) {
      for (std::int64_t j = 0; j < n; ++j) std::swap(f_(k, j), f_(piv, j));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
    }
    const double inv = 1.0 / f_(k, k);
    for (std::int64_t i = k + 1; i < n; ++i) {
      const double m = f_(i, k) * inv;
      f_(i, k) = m;
      if (m != 0.0)
        for (std::int64_t j = k + 1; j < n; ++j) f_(i, j) -= m * f_(k, j);
    }
  }
}

std::vector<double> LinearSolver::solve(std::span<const double> rhs) const {
  const std::int64_t n = f_.rows();
  if (static_cast<std::int64_t>(rhs.size()) != n)
    throw dimension_error("LinearSolver::solve: rhs length mismatch");
  std::vector<double> y(static_cast<std::size_t>(n));
  if (spd_) {
    for (std::int64_t i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(i)];
    for (std::int64_t i = 0; i < n; ++i) {
      double s = y[static_cast<std::size_t>(i)];
      for (std::int64_t k = 0; k < i; ++k) s -= f_(i, k) * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = s / f_(i, i);
    }
    for (std::int64_t i = n - 1; i >= 0; --i) {
      double s = y[static_cast<std::size_t>(i)];
      for (std::int64_t k = i + 1; k < n; ++k) s -= f_(k, i) * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = s / f_(i, i);
    }
    return y;
  }
  for (std::int64_t i = 0; i < n; ++i)
    y[static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
  for (std::int64_t i = 0; i < n; ++i) {
    double s = y[static_cast<std::size_t>(i)];
    for (std::int64_t k = 0; k < i; ++k) s -= f_(i, k) * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s;
  }
  for (std::int64_t i = n - 1; i >= 0; --i) {
    double s = y[static_cast<std::size_t>(i)];
    for (std::int64_t k = i + 1; k < n; ++k) s -= f_(i, k) * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s / f_(i, i);
  }
  return y;
}

}  // namespace orthopt
