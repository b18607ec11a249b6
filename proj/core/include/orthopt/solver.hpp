#pragma once

#include <cstdint>
#include <optional>

#include "orthopt/diagnostics.hpp"
#include "orthopt/matrix.hpp"
#include "orthopt/problems.hpp"
#include "orthopt/report.hpp"

namespace orthopt {

struct StepsizeRule {
  enum class Kind { Constant, Differential, Bb1, Bb2, Abb };
  Kind kind = Kind::Abb;
  double gamma = 1.0;       // Constant only
  double eta_min = 1e-10;   // safeguard interval
  double eta_max = 1e10;
  double eta0 = 0.0;        // first-iteration value; <= 0 means s + 2*beta
};

enum class MultiplierRule { PlamFormula, PcalFormula };

struct AlmOptions {
  int inner_max = 500;          // gradient steps per multiplier update
  int outer_max = 50;           // multiplier updates
  double inner_tol_scale = 0.1; // inner target: max(scale·tol, scale^k) · kkt0
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::Pcal;
  double beta = -1.0;  // < 0 selects the per-algorithm default (s+0.1, or 1 for PCAL)
  StepsizeRule eta_rule{};
  MultiplierRule multiplier_rule = MultiplierRule::PcalFormula;  // PCAL only
  double tol_rel_kkt = 1e-8;
  std::int64_t max_iter = 3000;
  int threads = 1;
  AlmOptions alm{};
  bool final_orth = true;

  void validate() const;
};

/// Penalty actually used once `auto` is resolved against the model's scale.
double resolve_beta(const SolverConfig& config, const ObjectiveModel& model);

enum class InitMode { Qr, A2TypeI, A2TypeII };

/// Start-point construction: feasible via orthonormalized Gaussian (qr), or
/// the two slightly-infeasible qualified constructions (a2-i scales the last
/// column of an orthonormal frame by sqrt(1 - sigma²); a2-ii draws singular
/// values inside (1 - 1/sqrt(p), 1 + 1/sqrt(p))).
struct InitialPointSpec {
  InitMode mode = InitMode::Qr;
  double sigma_lower = 0.5;  // a2-i only; requires sigma² <= 1/2
  std::uint64_t seed = 0;
};

DenseMatrix initial_point(const InitialPointSpec& spec, std::int64_t n, std::int64_t p);

/// Iteration state shared by the stepsize rules and the driver.
struct SolverState {
  DenseMatrix x;
  SquareSymmetric lambda;
  DenseMatrix grad_f;
  DenseMatrix grad_l;
  std::optional<DenseMatrix> prev_x;
  std::optional<DenseMatrix> prev_grad_l;
  std::int64_t iter = 0;
  double eta = 0.0;   // last proximal parameter used
  double eta0 = 0.0;
};

// Per-operation building blocks. The drivers compose these; they are exposed
// for direct testing.

/// grad_f - X·Lambda + beta·X·(XᵀX - I).
DenseMatrix aug_lag_gradient(const DenseMatrix& grad_f, const DenseMatrix& x,
                             const SquareSymmetric& lambda, double beta,
                             int threads = 1);

/// Closed-form multiplier Psi(grad_fᵀX).
SquareSymmetric multiplier_plam(const DenseMatrix& grad_f, const DenseMatrix& x,
                                int threads = 1);

/// Closed-form multiplier plus the diagonal correction for the redundant
/// unit-sphere column constraints:
/// Psi(grad_fᵀX) + Phi(Xᵀ grad L_beta(X, Psi(grad_fᵀX))).
SquareSymmetric multiplier_pcal(const ObjectiveModel& model, const DenseMatrix& x,
                                double beta, int threads = 1);

/// Proximal parameter for the next step; clamps into [eta_min, eta_max] and
/// falls back to the previous eta when the denominators vanish.
double stepsize_select(const StepsizeRule& rule, const SolverState& state);

/// X - (1/eta)·grad_l. Throws divergence_error when the result is non-finite.
DenseMatrix plam_step(const DenseMatrix& x, const DenseMatrix& grad_l, double eta,
                      double beta);

struct PcalStepResult {
  DenseMatrix x;
  std::int64_t degenerate_columns = 0;
};

/// Per-column normalized proximal step: each column of X - (1/eta)·grad_l is
/// scaled to unit norm. A column whose update norm falls below 1e-14 keeps the
/// previous column, renormalized, and is counted as degenerate.
PcalStepResult pcal_step(const DenseMatrix& x, const DenseMatrix& grad_l,
                         double eta, int threads = 1);

/// QR-retraction step: orthonormalize(X - (1/eta)(grad_f - X grad_fᵀX)).
DenseMatrix moptqr_step(const DenseMatrix& x, const DenseMatrix& grad_f,
                        double eta, int threads = 1);

/// Full run of the configured algorithm from x0: iterates until the relative
/// KKT residual drops below tol or max_iter is hit, then (by default)
/// orthonormalizes the final iterate and records metrics on both sides of that
/// post-process. Non-finite iterates end the run with status Diverged and a
/// partial trace. `timers`, when given, accumulates solver-level category time.
RunReport solve(const ObjectiveModel& model, const SolverConfig& config,
                const DenseMatrix& x0, CategoryTimers* timers = nullptr);

/// Classical augmented-Lagrangian outer loop: inner gradient descent on
/// L_beta(·, Lambda) followed by the dual ascent update of Lambda. Reports
/// inner and outer counts separately. solve() dispatches here for Alm.
RunReport alm_outer(const ObjectiveModel& model, const SolverConfig& config,
                    const DenseMatrix& x0, CategoryTimers* timers = nullptr);

}  // namespace orthopt
