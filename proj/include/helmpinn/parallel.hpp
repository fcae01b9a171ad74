#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace helmpinn {

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on up to
/// n_threads workers. Work items are independent; callers that reduce
/// results must do so indexed by chunk so that the outcome does not
/// depend on the thread count.
inline void parallel_chunks(int n_chunks, int n_threads,
                            const std::function<void(int)>& fn) {
  n_threads = std::max(1, std::min(n_threads, n_chunks));
  if (n_threads == 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&] {
      for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
        fn(c);
    });
  }
  for (auto& w : workers) w.join();
}

inline int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace helmpinn
