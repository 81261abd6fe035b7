#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace kloosterlab {

// Runs fn(begin, end) over disjoint chunks of [0, n) on up to `threads` workers
// (hardware concurrency when threads == 0). Caller owns any reduction; keep it
// deterministic by merging per-chunk results in index order.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn, unsigned threads = 0) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = threads == 0 ? hw : threads;
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace kloosterlab
