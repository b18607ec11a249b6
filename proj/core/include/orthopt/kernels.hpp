#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orthopt/matrix.hpp"

namespace orthopt {

// Dense kernels with a column-wise parallel execution contract: every kernel
// computes each output column independently with a fixed sequential
// accumulation order inside the column, so results are bitwise identical for
// every thread count. Thread counts are explicit parameters, never ambient.

/// Symmetric part (M + Mᵀ)/2 of a square matrix.
SquareSymmetric sym_part(const DenseMatrix& m);

/// Diagonal part of a square matrix, returned as a diagonal matrix.
DenseMatrix diag_part(const DenseMatrix& m);

/// Diagonal entries of a square matrix.
std::vector<double> diag_vector(const DenseMatrix& m);

/// Diagonal matrix with the given entries on its diagonal.
DenseMatrix diag_matrix(std::span<const double> v);

/// C = A·B. Column j of C is A·B[:,j]; the accumulation over the inner
/// dimension runs in index order within each column.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, int threads = 1);

/// C = Aᵀ·B without forming Aᵀ. Entry (i,j) is the dot of columns A[:,i] and
/// B[:,j], accumulated in row order.
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b, int threads = 1);

/// XᵀX, exactly symmetric: the upper triangle is computed and mirrored.
SquareSymmetric gram(const DenseMatrix& x, int threads = 1);

struct OrthFactor {
  DenseMatrix q;  // orthonormal columns, same span as the input
  DenseMatrix r;  // upper triangular with x = q·r
};

/// Orthonormalizes the columns of x via Cholesky of XᵀX applied twice (one
/// pass loses orthogonality quadratically in the condition number). Falls back
/// to two passes of modified Gram-Schmidt when a Cholesky pivot drops below
/// 1e-14·‖XᵀX‖_F. Throws rank_error if the fallback also hits the pivot floor.
OrthFactor orthonormalize_with_r(const DenseMatrix& x);

/// Q factor of orthonormalize_with_r.
DenseMatrix orthonormalize(const DenseMatrix& x);

/// Largest singular value of a symmetric matrix, estimated by power iteration
/// on A² (robust for sign-indefinite spectra) from a seeded start vector.
/// Iterates until the relative change is at most 1e-6 or 500 iterations, and
/// never returns more than ‖A‖_F.
double spectral_norm_estimate(const SquareSymmetric& a, std::uint64_t seed,
                              int threads = 1);

/// Row-wise squared norms diag(XXᵀ) computed in O(np) without forming XXᵀ.
std::vector<double> row_sq_norms(const DenseMatrix& x);

/// Σ A[i,j]·B[i,j] accumulated in storage order.
double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);
double frobenius_norm(const SquareSymmetric& a);

// Small BLAS1-level helpers shared by the solvers.

/// a + s·b
DenseMatrix add_scaled(const DenseMatrix& a, double s, const DenseMatrix& b);

/// In place: x(i,:) *= d[i], i.e. Diag(d)·X.
void scale_rows_in_place(DenseMatrix& x, std::span<const double> d);

/// In place: x(:,j) *= d[j], i.e. X·Diag(d).
void scale_cols_in_place(DenseMatrix& x, std::span<const double> d);

/// In place: a(i,i) += s for all i.
void add_scaled_identity_in_place(DenseMatrix& a, double s);

bool all_finite(const DenseMatrix& a);

double vector_norm(std::span<const double> v);

}  // namespace orthopt
