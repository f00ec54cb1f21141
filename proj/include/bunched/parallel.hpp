#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bunched {

// worker count: BUNCHCTL_THREADS wins, otherwise hardware concurrency
inline unsigned thread_count() {
  if (const char* env = std::getenv("BUNCHCTL_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// split [0, total) into contiguous chunks, run fn(chunk, begin, end) on the
// workers, results owned per chunk so the caller merges in chunk order and
// stays deterministic
template <class Fn>
inline void parallel_chunks(uint64_t total, unsigned chunks, Fn fn) {
  if (chunks <= 1 || total < 2) {
    fn(0u, uint64_t(0), total);
    return;
  }
  uint64_t step = (total + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  for (unsigned c = 0; c < chunks; ++c) {
    uint64_t b = uint64_t(c) * step;
    uint64_t e = b + step < total ? b + step : total;
    if (b >= e) break;
    pool.emplace_back([&fn, c, b, e] { fn(c, b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bunched
