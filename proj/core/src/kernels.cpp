#include "orthopt/kernels.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "orthopt/parallel.hpp"
#include "orthopt/rng.hpp"

namespace orthopt {

namespace {

void require_square(const DenseMatrix& m, const char* op) {
  if (m.rows() != m.cols())
    throw dimension_error(std::string(op) + ": input must be square, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

double dot(const double* a, const double* b, std::int64_t n) {
  double s = 0.0;
  for (std::int64_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SquareSymmetric SquareSymmetric::symmetrized(const DenseMatrix& m) {
  require_square(m, "sym_part");
  const std::int64_t n = m.rows();
  SquareSymmetric s(n);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i <= j; ++i)
      s.set_mirrored(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

SquareSymmetric SquareSymmetric::add_scaled(double s, const SquareSymmetric& other) const {
  if (order() != other.order())
    throw dimension_error("SquareSymmetric::add_scaled: order mismatch");
  const std::int64_t n = order();
  SquareSymmetric out(n);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i <= j; ++i)
      out.set_mirrored(i, j, (*this)(i, j) + s * other(i, j));
  return out;
}

DenseMatrix random_normal(std::int64_t rows, std::int64_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  double* d = m.data();
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) d[k] = rng.normal();
  return m;
}

DenseMatrix random_uniform(std::int64_t rows, std::int64_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  double* d = m.data();
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) d[k] = rng.uniform();
  return m;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on u1 in (0,1], u2 in [0,1); fixed two-draw consumption.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

SquareSymmetric sym_part(const DenseMatrix& m) {
  return SquareSymmetric::symmetrized(m);
}

DenseMatrix diag_part(const DenseMatrix& m) {
  require_square(m, "diag_part");
  DenseMatrix d(m.rows(), m.cols());
  for (std::int64_t i = 0; i < m.rows(); ++i) d(i, i) = m(i, i);
  return d;
}

std::vector<double> diag_vector(const DenseMatrix& m) {
  require_square(m, "diag_vector");
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (std::int64_t i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, i);
  return v;
}

DenseMatrix diag_matrix(std::span<const double> v) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  DenseMatrix d(n, n);
  for (std::int64_t i = 0; i < n; ++i) d(i, i) = v[static_cast<std::size_t>(i)];
  return d;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, int threads) {
  if (a.cols() != b.rows())
    throw dimension_error("matmul: inner dimensions " + std::to_string(a.cols()) +
                          " and " + std::to_string(b.rows()) + " do not agree");
  const std::int64_t m = a.rows();
  const std::int64_t kdim = a.cols();
  DenseMatrix c(m, b.cols());
  parallel_for_columns(b.cols(), threads, [&](std::int64_t j) {
    double* cj = c.col(j);
    const double* bj = b.col(j);
    for (std::int64_t k = 0; k < kdim; ++k) {
      const double s = bj[k];
      const double* ak = a.col(k);
      for (std::int64_t i = 0; i < m; ++i) cj[i] += s * ak[i];
    }
  });
  return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b, int threads) {
  if (a.rows() != b.rows())
    throw dimension_error("matmul_at_b: row counts " + std::to_string(a.rows()) +
                          " and " + std::to_string(b.rows()) + " do not agree");
  const std::int64_t m = a.cols();
  const std::int64_t n = a.rows();
  DenseMatrix c(m, b.cols());
  parallel_for_columns(b.cols(), threads, [&](std::int64_t j) {
    double* cj = c.col(j);
    const double* bj = b.col(j);
    for (std::int64_t i = 0; i < m; ++i) cj[i] = dot(a.col(i), bj, n);
  });
  return c;
}

SquareSymmetric gram(const DenseMatrix& x, int threads) {
  const std::int64_t p = x.cols();
  const std::int64_t n = x.rows();
  SquareSymmetric g(p);
  // Upper triangle in parallel (task j owns column j), then a serial mirror.
  DenseMatrix upper(p, p);
  parallel_for_columns(p, threads, [&](std::int64_t j) {
    double* uj = upper.col(j);
    const double* xj = x.col(j);
    for (std::int64_t i = 0; i <= j; ++i) uj[i] = dot(x.col(i), xj, n);
  });
  for (std::int64_t j = 0; j < p; ++j)
    for (std::int64_t i = 0; i <= j; ++i) g.set_mirrored(i, j, upper(i, j));
  return g;
}

namespace {

// In-place lower Cholesky of a copy of the symmetric input. Returns false as
// soon as a pivot falls at or below pivot_floor.
bool cholesky_lower(const SquareSymmetric& a, double pivot_floor, DenseMatrix& l) {
  const std::int64_t p = a.order();
  l = DenseMatrix(p, p);
  for (std::int64_t j = 0; j < p; ++j) {
    double d = a(j, j);
    for (std::int64_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > pivot_floor)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::int64_t i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (std::int64_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return true;
}

// Solves Q·Lᵀ = X for Q, column by column.
DenseMatrix solve_right_lt(const DenseMatrix& x, const DenseMatrix& l) {
  const std::int64_t n = x.rows();
  const std::int64_t p = x.cols();
  DenseMatrix q(n, p);
  for (std::int64_t j = 0; j < p; ++j) {
    double* qj = q.col(j);
    const double* xj = x.col(j);
    std::memcpy(qj, xj, static_cast<std::size_t>(n) * sizeof(double));
    for (std::int64_t k = 0; k < j; ++k) {
      const double s = l(j, k);
      const double* qk = q.col(k);
      for (std::int64_t i = 0; i < n; ++i) qj[i] -= s * qk[i];
    }
    const double inv = 1.0 / l(j, j);
    for (std::int64_t i = 0; i < n; ++i) qj[i] *= inv;
  }
  return q;
}

// R = Aᵀ·Bᵀ for lower-triangular A, B (the product of two upper triangulars).
DenseMatrix upper_product(const DenseMatrix& la, const DenseMatrix& lb) {
  const std::int64_t p = la.rows();
  DenseMatrix r(p, p);
  for (std::int64_t j = 0; j < p; ++j)
    for (std::int64_t i = 0; i <= j; ++i) {
      double s = 0.0;
      for (std::int64_t k = i; k <= j; ++k) s += la(k, i) * lb(j, k);
      r(i, j) = s;
    }
  return r;
}

// Two passes of modified Gram-Schmidt; pivot check against the same floor as
// the Cholesky route.
OrthFactor mgs2(const DenseMatrix& x, double pivot_floor) {
  const std::int64_t n = x.rows();
  const std::int64_t p = x.cols();
  DenseMatrix q = x;
  DenseMatrix r_total = DenseMatrix::identity(p);
  for (int pass = 0; pass < 2; ++pass) {
    DenseMatrix r(p, p);
    for (std::int64_t j = 0; j < p; ++j) {
      double* qj = q.col(j);
      for (std::int64_t k = 0; k < j; ++k) {
        const double* qk = q.col(k);
        const double s = dot(qk, qj, n);
        r(k, j) = s;
        for (std::int64_t i = 0; i < n; ++i) qj[i] -= s * qk[i];
      }
      const double nrm2 = dot(qj, qj, n);
      if (!(nrm2 > pivot_floor))
        throw rank_error("orthonormalize: numerically rank-deficient input (column " +
                         std::to_string(j) + ")");
      const double nrm = std::sqrt(nrm2);
      r(j, j) = nrm;
      const double inv = 1.0 / nrm;
      for (std::int64_t i = 0; i < n; ++i) qj[i] *= inv;
    }
    DenseMatrix next(p, p);
    for (std::int64_t j = 0; j < p; ++j)
      for (std::int64_t i = 0; i <= j; ++i) {
        double s = 0.0;
        for (std::int64_t k = i; k <= j; ++k) s += r(i, k) * r_total(k, j);
        next(i, j) = s;
      }
    r_total = std::move(next);
  }
  return {std::move(q), std::move(r_total)};
}

}  // namespace

OrthFactor orthonormalize_with_r(const DenseMatrix& x) {
  const SquareSymmetric b = gram(x);
  const double pivot_floor = 1e-14 * frobenius_norm(b);
  DenseMatrix l1;
  if (!cholesky_lower(b, pivot_floor, l1)) return mgs2(x, pivot_floor);
  DenseMatrix q1 = solve_right_lt(x, l1);
  const SquareSymmetric b2 = gram(q1);
  DenseMatrix l2;
  if (!cholesky_lower(b2, pivot_floor, l2)) return mgs2(x, pivot_floor);
  DenseMatrix q = solve_right_lt(q1, l2);
  return {std::move(q), upper_product(l2, l1)};
}

DenseMatrix orthonormalize(const DenseMatrix& x) {
  return orthonormalize_with_r(x).q;
}

double spectral_norm_estimate(const SquareSymmetric& a, std::uint64_t seed,
                              int threads) {
  const std::int64_t n = a.order();
  const double fro = frobenius_norm(a);
  if (fro == 0.0) return 0.0;
  Rng rng(seed);
  DenseMatrix v = random_normal(n, 1, rng);
  {
    const double nv = vector_norm(v.values());
    if (nv == 0.0) v(0, 0) = 1.0;  // cannot happen with Box-Muller draws
    else for (auto& e : v.values()) e /= nv;
  }
  double prev = -1.0;
  double est = 0.0;
  for (int it = 0; it < 500; ++it) {
    DenseMatrix w = matmul(a.matrix(), v, threads);
    est = vector_norm(w.values());  // = sqrt(vᵀA²v) for unit v
    DenseMatrix t = matmul(a.matrix(), w, threads);
    const double nt = vector_norm(t.values());
    if (nt == 0.0) break;  // v in the kernel of A²; est from the last image
    for (auto& e : t.values()) e /= nt;
    v = std::move(t);
    if (prev >= 0.0 && std::abs(est - prev) <= 1e-6 * std::max(est, 1e-300)) break;
    prev = est;
  }
  return std::min(est, fro);
}

std::vector<double> row_sq_norms(const DenseMatrix& x) {
  std::vector<double> out(static_cast<std::size_t>(x.rows()), 0.0);
  for (std::int64_t j = 0; j < x.cols(); ++j) {
    const double* xj = x.col(j);
    for (std::int64_t i = 0; i < x.rows(); ++i)
      out[static_cast<std::size_t>(i)] += xj[i] * xj[i];
  }
  return out;
}

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b))
    throw dimension_error("frobenius_inner: shape mismatch");
  return dot(a.data(), b.data(), static_cast<std::int64_t>(a.size()));
}

double frobenius_norm(const DenseMatrix& a) {
  return std::sqrt(frobenius_inner(a, a));
}

double frobenius_norm(const SquareSymmetric& a) {
  return frobenius_norm(a.matrix());
}

DenseMatrix add_scaled(const DenseMatrix& a, double s, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw dimension_error("add_scaled: shape mismatch");
  DenseMatrix c = a;
  double* cd = c.data();
  const double* bd = b.data();
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) cd[k] += s * bd[k];
  return c;
}

void scale_rows_in_place(DenseMatrix& x, std::span<const double> d) {
  if (static_cast<std::int64_t>(d.size()) != x.rows())
    throw dimension_error("scale_rows_in_place: length mismatch");
  for (std::int64_t j = 0; j < x.cols(); ++j) {
    double* xj = x.col(j);
    for (std::int64_t i = 0; i < x.rows(); ++i) xj[i] *= d[static_cast<std::size_t>(i)];
  }
}

void scale_cols_in_place(DenseMatrix& x, std::span<const double> d) {
  if (static_cast<std::int64_t>(d.size()) != x.cols())
    throw dimension_error("scale_cols_in_place: length mismatch");
  for (std::int64_t j = 0; j < x.cols(); ++j) {
    double* xj = x.col(j);
    const double s = d[static_cast<std::size_t>(j)];
    for (std::int64_t i = 0; i < x.rows(); ++i) xj[i] *= s;
  }
}

void add_scaled_identity_in_place(DenseMatrix& a, double s) {
  const std::int64_t n = std::min(a.rows(), a.cols());
  for (std::int64_t i = 0; i < n; ++i) a(i, i) += s;
}

bool all_finite(const DenseMatrix& a) {
  for (double v : a.values())
    if (!std::isfinite(v)) return false;
  return true;
}

double vector_norm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

}  // namespace orthopt
