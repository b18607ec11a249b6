#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace orthopt {

/// Runs fn(j) for every j in [0, count), splitting the index range into
/// contiguous chunks across `threads` worker threads. Each index is handled by
/// exactly one thread and fn must write only state owned by its index, so the
/// result is identical for every thread count. Thread count is always an
/// explicit argument; nothing is read from the environment.
template <typename Fn>
void parallel_for_columns(std::int64_t count, int threads, Fn&& fn) {
  if (count <= 0) return;
  const std::int64_t workers =
      std::min<std::int64_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::int64_t j = 0; j < count; ++j) fn(j);
    return;
  }
  auto run_range = [&fn](std::int64_t begin, std::int64_t end) {
    for (std::int64_t j = begin; j < end; ++j) fn(j);
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const std::int64_t base = count / workers;
  const std::int64_t extra = count % workers;
  std::int64_t begin = 0;
  for (std::int64_t w = 0; w < workers; ++w) {
    const std::int64_t len = base + (w < extra ? 1 : 0);
    const std::int64_t end = begin + len;
    if (w + 1 == workers) {
      run_range(begin, end);
    } else {
      pool.emplace_back(run_range, begin, end);
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace orthopt
