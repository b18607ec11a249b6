#include <benchmark/benchmark.h>

#include "orthopt/kernels.hpp"
#include "orthopt/rng.hpp"

using namespace orthopt;

namespace {

DenseMatrix randn(std::int64_t r, std::int64_t c, std::uint64_t seed) {
  Rng rng(seed);
  return random_normal(r, c, rng);
}

void BM_matmul_tall(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const std::int64_t p = state.range(1);
  const int threads = static_cast<int>(state.range(2));
  const DenseMatrix x = randn(n, p, 1);
  const DenseMatrix m = randn(p, p, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(matmul(x, m, threads));
  }
  state.SetItemsProcessed(state.iterations());
  state.counters["flops"] = benchmark::Counter(
      2.0 * static_cast<double>(n) * static_cast<double>(p) * static_cast<double>(p) *
          static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}

void BM_gram(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const std::int64_t p = state.range(1);
  const int threads = static_cast<int>(state.range(2));
  const DenseMatrix x = randn(n, p, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram(x, threads));
  }
}

void BM_orthonormalize(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const std::int64_t p = state.range(1);
  const DenseMatrix x = randn(n, p, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(orthonormalize(x));
  }
}

void BM_row_sq_norms(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const DenseMatrix x = randn(n, 32, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(row_sq_norms(x));
  }
}

}  // namespace

BENCHMARK(BM_matmul_tall)
    ->Args({2000, 50, 1})
    ->Args({2000, 50, 2})
    ->Args({2000, 50, 4})
    ->Args({4000, 200, 1})
    ->Args({4000, 200, 2})
    ->Args({4000, 200, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK(BM_gram)
    ->Args({2000, 50, 1})
    ->Args({2000, 50, 2})
    ->Args({4000, 200, 1})
    ->Args({4000, 200, 2})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK(BM_orthonormalize)->Args({2000, 50})->Args({4000, 200})->Unit(benchmark::kMillisecond);

BENCHMARK(BM_row_sq_norms)->Arg(2000)->Arg(20000);
