#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthopt/matrix.hpp"

namespace orthopt {

/// One row of the per-iteration trace.
struct MetricSample {
  std::int64_t iter = 0;
  double fval = 0.0;
  double kkt_abs = 0.0;
  double kkt_rel = 0.0;  // kkt_abs divided by the cached value at the start point
  double feas = 0.0;     // ||XᵀX - I||_F
  double eta = 0.0;      // proximal parameter active at this iterate
  double elapsed = 0.0;  // seconds since the run started
};

enum class RunStatus { Converged, MaxIter, Diverged };

const char* run_status_name(RunStatus s);

struct FinalMetrics {
  double fval = 0.0;
  double kkt_abs = 0.0;
  double kkt_rel = 0.0;
  double feas = 0.0;
};

/// Echo of every knob that shaped a run, for reproducibility.
struct ConfigEcho {
  std::string problem;
  std::int64_t n = 0;
  std::int64_t p = 0;
  std::string solver;
  double beta = 0.0;
  std::string eta_rule;
  double tol_rel_kkt = 0.0;
  std::int64_t max_iter = 0;
  int threads = 1;
  std::string init;
  std::uint64_t seed = 0;
  double alpha = 0.0, kappa = 0.0, theta = 0.0, zeta = 0.0, xi = 0.0;
  double curvature_scale = 0.0;  // the s the defaults were derived from
};

struct RunReport {
  ConfigEcho config;
  std::vector<MetricSample> trace;
  FinalMetrics final_pre_orth;
  std::optional<FinalMetrics> final_post_orth;
  DenseMatrix stop_iterate;  // last iterate produced by the iteration
  DenseMatrix final_x;       // what the headline metrics describe (post-orth when applied)
  std::int64_t iterations = 0;       // gradient steps taken
  std::int64_t outer_iterations = 0; // multiplier updates (ALM only)
  std::int64_t inner_cap_hits = 0;   // ALM inner loops stopped by the cap
  std::int64_t degenerate_steps = 0; // normalization steps that kept a column
  double wall_time = 0.0;            // seconds
  RunStatus status = RunStatus::MaxIter;
};

/// Per-category wall time accumulated at the solver level only; dense products
/// performed inside objective evaluation count toward func, not blas3.
struct CategoryTimers {
  double blas3 = 0.0;
  double func = 0.0;
  double orth = 0.0;
};

struct ScalingReport {
  std::vector<int> threads;
  std::vector<double> wall_times;     // seconds per thread count
  std::vector<double> speedups;       // wall_times[0] / wall_times[i]
  std::vector<CategoryTimers> categories;
  std::vector<RunReport> runs;
  bool identical_results = false;     // bitwise equality across thread counts
  bool hardware_oversubscribed = false;
};

}  // namespace orthopt
