#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orthopt/errors.hpp"

namespace orthopt {

class Rng;

/// Column-major dense matrix of 64-bit reals. The universal carrier for
/// iterates, gradients and problem data; columns are contiguous so that
/// column-sliced parallel kernels touch disjoint cache lines.
class DenseMatrix {
public:
  DenseMatrix() = default;

  DenseMatrix(std::int64_t rows, std::int64_t cols)
      : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1)
      throw dimension_error("DenseMatrix: dimensions must be positive");
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
  }

  static DenseMatrix identity(std::int64_t n) {
    DenseMatrix m(n, n);
    for (std::int64_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::int64_t i, std::int64_t j) {
    return data_[static_cast<std::size_t>(i) +
                 static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_)];
  }
  double operator()(std::int64_t i, std::int64_t j) const {
    return data_[static_cast<std::size_t>(i) +
                 static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_)];
  }

  double* col(std::int64_t j) {
    return data_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_);
  }
  const double* col(std::int64_t j) const {
    return data_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_);
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  bool same_shape(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<double> data_;
};

/// Square matrix that is exactly symmetric: every constructor and mutator
/// writes both triangles from a single computed value, so data(i,j) == data(j,i)
/// holds bitwise, never merely up to rounding.
class SquareSymmetric {
public:
  SquareSymmetric() = default;

  explicit SquareSymmetric(std::int64_t order) : m_(order, order) {}

  static SquareSymmetric identity(std::int64_t n) {
    SquareSymmetric s(n);
    for (std::int64_t i = 0; i < n; ++i) s.m_(i, i) = 1.0;
    return s;
  }

  /// Builds (M + Mᵀ)/2 from an arbitrary square matrix.
  static SquareSymmetric symmetrized(const DenseMatrix& m);

  std::int64_t order() const { return m_.rows(); }
  const DenseMatrix& matrix() const { return m_; }

  double operator()(std::int64_t i, std::int64_t j) const { return m_(i, j); }

  /// Writes value into (i,j) and (j,i).
  void set_mirrored(std::int64_t i, std::int64_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  /// Entrywise this + s·other; symmetry is preserved exactly because each
  /// (i,j)/(j,i) pair is computed once and mirrored.
  SquareSymmetric add_scaled(double s, const SquareSymmetric& other) const;

private:
  DenseMatrix m_;
};

/// Fills an n-by-p matrix with standard normal deviates in column-major order.
DenseMatrix random_normal(std::int64_t rows, std::int64_t cols, Rng& rng);

/// Fills an n-by-p matrix with uniform [0,1) deviates in column-major order.
DenseMatrix random_uniform(std::int64_t rows, std::int64_t cols, Rng& rng);

}  // namespace orthopt
