#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "orthopt/problems.hpp"
#include "orthopt/report.hpp"
#include "orthopt/solver.hpp"

namespace orthopt {

/// Declarative description of a problem instance; the seed makes generation
/// reproducible bit for bit.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::P2;
  std::int64_t n = 100;
  std::int64_t p = 5;
  double alpha = 1.0;                       // p1
  double kappa = 1.0, theta = 1.01, zeta = 1.01, xi = 1.0;  // p2
  OperatorMode mode = OperatorMode::RandomSym;              // p1/p6
  std::uint64_t seed = 0;
};

std::unique_ptr<ObjectiveModel> make_problem(const ProblemSpec& spec, int threads = 1);

/// One end-to-end run: generate the instance, build the start point and solve.
/// Deterministic for a fixed seed, and across thread counts by the kernel
/// determinism contract. Solver exceptions become status Diverged with a
/// partial trace rather than escaping.
RunReport run_single(const ProblemSpec& problem, const SolverConfig& solver,
                     const InitialPointSpec& init, CategoryTimers* timers = nullptr);

/// Cross product of problems x solvers x seeds; one CSV summary row per cell.
/// A failing cell is recorded with its status and never aborts the matrix.
struct MatrixSpec {
  std::vector<ProblemSpec> problems;
  std::vector<Algorithm> solvers;
  std::vector<std::uint64_t> seeds;
  SolverConfig base;       // algorithm field is overridden per cell
  InitMode init = InitMode::Qr;
  double sigma_lower = 0.5;
};

void run_matrix(const MatrixSpec& spec, std::ostream& csv_out);

/// Thread-scaling study: repeats the identical run per thread count, asserts
/// the numerical results agree bitwise before reporting any speedup, and
/// carries the solver-level category breakdown. The thread list must start at 1.
ScalingReport run_scaling(const ProblemSpec& problem, const SolverConfig& solver,
                          const InitialPointSpec& init, const std::vector<int>& threads);

/// Echo of the full cell configuration into a report.
void fill_config_echo(RunReport& report, const ProblemSpec& problem,
                      const InitialPointSpec& init);

}  // namespace orthopt
