#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hyperlab {

/// Worker count: HYPERLAB_THREADS caps it, hardware concurrency otherwise.
inline unsigned num_workers() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("HYPERLAB_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

/// Runs body(chunk_index, begin, end) over fixed-size chunks.  Chunk
/// boundaries do not depend on the worker count, so per-chunk results can be
/// reduced in index order for thread-count-independent output.
template <class Body>
void parallel_chunks(std::size_t total, std::size_t chunk, Body body) {
  if (total == 0) return;
  std::size_t n_chunks = (total + chunk - 1) / chunk;
  unsigned workers = num_workers();
  if (workers == 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      body(c, c * chunk, std::min(total, (c + 1) * chunk));
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        body(c, c * chunk, std::min(total, (c + 1) * chunk));
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hyperlab
