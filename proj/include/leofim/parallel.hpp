#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace leofim {

/// Runs fn(i) for i in [0, n) on up to `jobs` workers. Work items claim
/// indices from a shared counter; callers must write results into
/// preallocated per-index slots so output order never depends on scheduling.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min(jobs, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace leofim
