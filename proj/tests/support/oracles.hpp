// Test-only reference implementations, independent of the library's kernel
// paths: plain scalar loops and a cyclic Jacobi eigensolver. These exist so
// the production kernels can be checked against code with no shared machinery.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "orthopt/matrix.hpp"

namespace oracles {

using orthopt::DenseMatrix;

// Triple-loop product; the inner accumulation runs over k in index order, the
// same mathematical sequence the column-parallel kernel uses.
inline DenseMatrix matmul_ref(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::int64_t j = 0; j < b.cols(); ++j)
    for (std::int64_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (std::int64_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline DenseMatrix transpose_ref(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::int64_t j = 0; j < a.cols(); ++j)
    for (std::int64_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

inline double fro_inner_ref(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  for (std::int64_t j = 0; j < a.cols(); ++j)
    for (std::int64_t i = 0; i < a.rows(); ++i) s += a(i, j) * b(i, j);
  return s;
}

inline double fro_norm_ref(const DenseMatrix& a) { return std::sqrt(fro_inner_ref(a, a)); }

inline bool bits_equal(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::int64_t j = 0; j < a.cols(); ++j)
    for (std::int64_t i = 0; i < a.rows(); ++i) {
      const double x = a(i, j);
      const double y = b(i, j);
      if (std::memcmp(&x, &y, sizeof x) != 0) return false;
    }
  return true;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(DenseMatrix a, int max_sweeps = 100) {
  const std::int64_t n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::int64_t q = 0; q < n; ++q)
      for (std::int64_t p = 0; p < q; ++p) off += a(p, q) * a(p, q);
    double diag = 0.0;
    for (std::int64_t i = 0; i < n; ++i) diag += a(i, i) * a(i, i);
    if (std::sqrt(off) <= 1e-15 * (1.0 + std::sqrt(diag))) break;
    for (std::int64_t p = 0; p < n - 1; ++p)
      for (std::int64_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::int64_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::int64_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace oracles
