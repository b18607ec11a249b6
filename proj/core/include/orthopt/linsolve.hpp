#pragma once

#include <cstdint>
#include <vector>

#include "orthopt/matrix.hpp"

namespace orthopt {

/// Factorize-once direct solver for a fixed symmetric matrix. Tries Cholesky
/// first and falls back to LU with partial pivoting when the matrix is not
/// positive definite. Solving never forms an inverse or pseudo-inverse.
class LinearSolver {
public:
  LinearSolver() = default;

  /// Throws generation_error if the matrix is numerically singular.
  explicit LinearSolver(const SquareSymmetric& a);

  std::vector<double> solve(std::span<const double> rhs) const;

  bool spd() const { return spd_; }

private:
  DenseMatrix f_;                  // Cholesky L, or packed LU factors
  std::vector<std::int64_t> perm_; // row permutation (LU only)
  bool spd_ = false;
};

}  // namespace orthopt
