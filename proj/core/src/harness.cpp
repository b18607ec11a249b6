#include "orthopt/harness.hpp"

#include <chrono>
#include <cstring>
#include <iostream>
#include <ostream>
#include <thread>

#include "orthopt/kernels.hpp"
#include "orthopt/report_io.hpp"

namespace orthopt {

namespace {

// Start-point seed derived from the instance seed so that one CLI seed drives
// the whole run while the two streams stay decorrelated.
std::uint64_t init_seed(std::uint64_t seed) { return seed ^ 0x1235713ULL; }

const char* init_name(const InitialPointSpec& init) {
  switch (init.mode) {
    case InitMode::Qr: return "qr";
    case InitMode::A2TypeI: return "a2-i";
    case InitMode::A2TypeII: return "a2-ii";
  }
  return "?";
}

}  // namespace

std::unique_ptr<ObjectiveModel> make_problem(const ProblemSpec& spec, int threads) {
  switch (spec.kind) {
    case ProblemKind::P1:
      return gen_problem1(spec.n, spec.p, spec.alpha, spec.mode, spec.seed, threads);
    case ProblemKind::P2:
      return gen_problem2(spec.n, spec.p, spec.kappa, spec.theta, spec.zeta, spec.xi,
                          spec.seed, threads);
    case ProblemKind::P3:
      return gen_problem3(spec.n, spec.p, spec.theta, spec.xi, spec.seed, threads);
    case ProblemKind::P4:
      return gen_problem4(spec.n, spec.p, spec.seed, threads);
    case ProblemKind::P6:
      return gen_problem6(spec.n, spec.p, spec.mode, spec.seed, threads);
  }
  throw parameter_error("make_problem: unknown problem kind");
}

void fill_config_echo(RunReport& report, const ProblemSpec& problem,
                      const InitialPointSpec& init) {
  report.config.problem = problem_kind_name(problem.kind);
  report.config.n = problem.n;
  report.config.p = problem.p;
  report.config.seed = problem.seed;
  report.config.alpha = problem.alpha;
  report.config.kappa = problem.kappa;
  report.config.theta = problem.theta;
  report.config.zeta = problem.zeta;
  report.config.xi = problem.xi;
  report.config.init = init_name(init);
}

RunReport run_single(const ProblemSpec& problem, const SolverConfig& solver,
                     const InitialPointSpec& init, CategoryTimers* timers) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = make_problem(problem, solver.threads);
  InitialPointSpec init_used = init;
  init_used.seed = init.seed != 0 ? init.seed : init_seed(problem.seed);
  const DenseMatrix x0 = initial_point(init_used, problem.n, problem.p);
  RunReport report = solve(*model, solver, x0, timers);
  fill_config_echo(report, problem, init_used);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

void run_matrix(const MatrixSpec& spec, std::ostream& csv_out) {
  if (spec.problems.empty() || spec.solvers.empty() || spec.seeds.empty())
    throw parameter_error("run_matrix: empty problem/solver/seed list");
  write_summary_header(csv_out);
  for (const ProblemSpec& prob : spec.problems) {
    for (const Algorithm alg : spec.solvers) {
      for (const std::uint64_t seed : spec.seeds) {
        ProblemSpec cell = prob;
        cell.seed = seed;
        SolverConfig cfg = spec.base;
        cfg.algorithm = alg;
        InitialPointSpec init{spec.init, spec.sigma_lower, 0};
        RunReport report;
        try {
          report = run_single(cell, cfg, init);
        } catch (const std::exception& e) {
          // A failed cell is a recorded row, not an aborted matrix.
          std::cerr << "cell " << problem_kind_name(cell.kind) << "/"
                    << algorithm_name(alg) << "/" << seed << " failed: " << e.what()
                    << "\n";
          report.status = RunStatus::Diverged;
          fill_config_echo(report, cell, init);
          report.config.solver = algorithm_name(alg);
        }
        write_summary_row(report, csv_out);
        if (!csv_out) throw io_error("run_matrix: CSV write failed");
      }
    }
  }
}

ScalingReport run_scaling(const ProblemSpec& problem, const SolverConfig& solver,
                          const InitialPointSpec& init, const std::vector<int>& threads) {
  if (threads.empty() || threads.front() != 1)
    throw parameter_error("run_scaling: thread list must start at 1");
  ScalingReport report;
  const unsigned hw = std::thread::hardware_concurrency();
  for (const int m : threads) {
    if (m < 1) throw parameter_error("run_scaling: thread counts must be positive");
    if (hw != 0 && static_cast<unsigned>(m) > hw) {
      report.hardware_oversubscribed = true;
      std::cerr << "warning: requesting " << m << " threads on " << hw
                << " hardware threads\n";
    }
    SolverConfig cfg = solver;
    cfg.threads = m;
    CategoryTimers timers;
    RunReport run = run_single(problem, cfg, init, &timers);
    report.threads.push_back(m);
    report.wall_times.push_back(run.wall_time);
    report.categories.push_back(timers);
    report.runs.push_back(std::move(run));
  }
  report.identical_results = true;
  for (std::size_t i = 1; i < report.runs.size(); ++i)
    if (!same_numerics(report.runs.front(), report.runs[i])) {
      report.identical_results = false;
      break;
    }
  for (double t : report.wall_times)
    report.speedups.push_back(t > 0.0 ? report.wall_times.front() / t : 0.0);
  if (!report.speedups.empty()) report.speedups.front() = 1.0;  // by definition
  return report;
}

}  // namespace orthopt
