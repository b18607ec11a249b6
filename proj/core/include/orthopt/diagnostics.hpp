#pragma once

#include <cstdint>

#include "orthopt/matrix.hpp"
#include "orthopt/problems.hpp"

namespace orthopt {

enum class Algorithm { Plam, Pcal, Alm, MoptQr, PlamDa, PcalDa };

const char* algorithm_name(Algorithm a);

/// Stationarity residual ||grad_f - X Psi(grad_fᵀX)||_F, the symmetrized form
/// used as the stopping-rule numerator by every solver here.
double kkt_violation(const DenseMatrix& grad_f, const DenseMatrix& x, int threads = 1);
double kkt_violation(const ObjectiveModel& model, const DenseMatrix& x, int threads = 1);

/// ||XᵀX - I||_F.
double feasibility_violation(const DenseMatrix& x, int threads = 1);

/// Merit value f(X) - 1/2 <Psi(grad_fᵀX), XᵀX - I> + beta/4 ||XᵀX - I||²_F.
double merit_h(const ObjectiveModel& model, const DenseMatrix& x, double beta,
               int threads = 1);

/// Computable feasibility bound: with delta = beta·sigma_min(X)² - ||grad_f||₂||X||₂,
/// a positive delta certifies ||XᵀX - I||_F <= (||X||₂/delta)·||grad L_beta||_F at
/// the closed-form multiplier. Spectral quantities come from shifted power
/// iteration on XᵀX (tolerance 1e-8).
struct FeasibilityBoundResult {
  bool applicable = false;  // delta > 0 and X numerically full rank
  double delta = 0.0;
  double lhs = 0.0;   // ||XᵀX - I||_F
  double rhs = 0.0;   // (||X||₂/delta)·||grad L||_F
  bool holds = false;
  double slack = 0.0;  // rhs - lhs
};

FeasibilityBoundResult feasibility_bound_check(const ObjectiveModel& model,
                                               const DenseMatrix& x, double beta,
                                               int threads = 1);

/// Leading-term flop count per iteration: 7np² for the infeasible solvers,
/// plus the p³/3 Cholesky term for the QR-retraction baseline.
double flops_estimate(Algorithm algorithm, std::int64_t n, std::int64_t p);

}  // namespace orthopt
