#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace phasecover {

/// Runs fn(i) for i in [0, n) across up to `threads` workers. Callers store
/// per-index results and reduce in index order afterwards, so the outcome
/// never depends on the thread count.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Thread-count resolution: PHASECOVER_THREADS wins over the requested value.
inline int resolve_threads(int requested) {
  if (const char* env = std::getenv("PHASECOVER_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return requested > 0 ? requested : 1;
}

}  // namespace phasecover
