#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace gphs {

/// Fixed-size chunking: f(chunk_index, begin, end) over [0, n). The chunk grid
/// depends only on n and chunk_size, never on the thread count, so per-chunk
/// partial results combined in chunk order give bit-identical totals for any
/// number of workers.
template <class F>
void parallel_chunks(long long n, long long chunk_size, int threads, F&& f) {
  if (n <= 0) return;
  const long long chunks = (n + chunk_size - 1) / chunk_size;
  if (threads <= 1 || chunks == 1) {
    for (long long ci = 0; ci < chunks; ++ci)
      f(ci, ci * chunk_size, std::min(n, (ci + 1) * chunk_size));
    return;
  }
  std::atomic<long long> next{0};
  auto worker = [&] {
    for (;;) {
      long long ci = next.fetch_add(1);
      if (ci >= chunks) return;
      f(ci, ci * chunk_size, std::min(n, (ci + 1) * chunk_size));
    }
  };
  int nw = static_cast<int>(std::min<long long>(threads, chunks));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace gphs
