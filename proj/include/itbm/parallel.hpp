#pragma once
// Deterministic replica parallelism: work is keyed by replica index and
// written to index-addressed slots, so results do not depend on the worker
// count or scheduling order.

#include <cstddef>
#include <thread>
#include <vector>

namespace itbm {

inline unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = default_workers();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned k = static_cast<unsigned>(
      std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (unsigned w = 0; w < k; ++w) {
    pool.emplace_back([&fn, w, k, n] {
      for (std::size_t i = w; i < n; i += k) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace itbm
