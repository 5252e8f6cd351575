#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace fvddp {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [0, total) into fixed-size chunks and runs fn(chunk_index, count)
// on a worker pool. Chunk boundaries depend only on total and chunk_size,
// never on the thread count, so per-chunk results are identical for every
// scheduling; callers merge the returned slots in index order.
template <typename Result, typename Fn>
std::vector<Result> run_chunked(uint64_t total, uint64_t chunk_size,
                                int threads, Fn fn) {
  const uint64_t n_chunks =
      total == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Result> slots(n_chunks);
  std::atomic<uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      uint64_t begin = c * chunk_size;
      uint64_t count = std::min(chunk_size, total - begin);
      slots[c] = fn(c, count);
    }
  };
  uint64_t nt = std::min<uint64_t>(
      static_cast<uint64_t>(resolve_threads(threads)), std::max<uint64_t>(n_chunks, 1));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (uint64_t i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return slots;
}

}  // namespace fvddp
