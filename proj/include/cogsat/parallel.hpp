#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace cogsat {

// Runs fn(i) for i in [0, count) across worker threads. Each index writes
// only its own preallocated slot and any reduction happens sequentially
// afterwards, so results do not depend on the thread count.
inline void parallel_for(std::int64_t count, int threads,
                         const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (static_cast<std::int64_t>(workers) > count) workers = static_cast<unsigned>(count);
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Pairwise summation; the result is independent of how trials were
// distributed over threads.
inline double pairwise_sum(const std::vector<double>& values, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(values, 0, values.size());
}

}  // namespace cogsat
