#include <benchmark/benchmark.h>

#include "orthopt/harness.hpp"
#include "orthopt/solver.hpp"

using namespace orthopt;

namespace {

// One fixed-length solver run per iteration; sizes follow the structured
// operator instance so evaluation stays cheap relative to the solver BLAS3.
void BM_pcal_run(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const std::int64_t p = state.range(1);
  const int threads = static_cast<int>(state.range(2));
  ProblemSpec spec;
  spec.kind = ProblemKind::P1;
  spec.mode = OperatorMode::BlockTridiag;
  spec.n = n;
  spec.p = p;
  spec.seed = 7;
  const auto model = make_problem(spec, threads);
  const DenseMatrix x0 = initial_point({InitMode::Qr, 0.5, 8}, n, p);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::Pcal;
  cfg.threads = threads;
  cfg.max_iter = 20;
  cfg.tol_rel_kkt = 1e-14;  // run the full 20 steps
  cfg.final_orth = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(*model, cfg, x0));
  }
}

void BM_moptqr_run(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const std::int64_t p = state.range(1);
  const int threads = static_cast<int>(state.range(2));
  ProblemSpec spec;
  spec.kind = ProblemKind::P1;
  spec.mode = OperatorMode::BlockTridiag;
  spec.n = n;
  spec.p = p;
  spec.seed = 7;
  const auto model = make_problem(spec, threads);
  const DenseMatrix x0 = initial_point({InitMode::Qr, 0.5, 8}, n, p);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::MoptQr;
  cfg.threads = threads;
  cfg.max_iter = 20;
  cfg.tol_rel_kkt = 1e-14;
  cfg.final_orth = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(*model, cfg, x0));
  }
}

}  // namespace

BENCHMARK(BM_pcal_run)
    ->Args({1000, 50, 1})
    ->Args({1000, 50, 2})
    ->Args({1000, 100, 1})
    ->Args({1000, 100, 2})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK(BM_moptqr_run)
    ->Args({1000, 50, 1})
    ->Args({1000, 50, 2})
    ->Args({1000, 100, 1})
    ->Args({1000, 100, 2})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
