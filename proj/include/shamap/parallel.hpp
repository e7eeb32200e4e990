#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace shamap {

// Worker count: SHAMAP_THREADS caps it, 0 or unset means auto.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SHAMAP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0 && static_cast<unsigned>(v) < hw) return static_cast<unsigned>(v);
  }
  return hw;
}

// Runs fn(i) for i in [0, n). Each index must write only its own outputs;
// the result is then independent of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] {
      for (std::size_t i = c; i < n; i += chunks) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace shamap
