#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace axisym {

/// Worker count from AXISYM_THREADS (default 1). Only loops whose iterations
/// write disjoint outputs are parallelised, so results never depend on it.
inline int thread_count() {
  static const int n = [] {
    const char* s = std::getenv("AXISYM_THREADS");
    const int v = s ? std::atoi(s) : 1;
    return std::max(1, v);
  }();
  return n;
}

template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
}

}  // namespace axisym
