#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace stagegames {

// Worker cap: STAGEGAMES_THREADS when set, hardware concurrency otherwise.
inline unsigned thread_count() {
  static const unsigned cached = [] {
    if (const char* env = std::getenv("STAGEGAMES_THREADS")) {
      const long parsed = std::strtol(env, nullptr, 10);
      if (parsed >= 1) return static_cast<unsigned>(parsed);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1u;
  }();
  return cached;
}

// Static-chunked parallel loop. Each index is visited exactly once and writes
// only its own slot, so results do not depend on the schedule. Small loops run
// inline to avoid spawn overhead.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t grain = 256) {
  const unsigned workers = thread_count();
  if (workers <= 1 || count < grain) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned used = static_cast<unsigned>(
      std::min<std::size_t>(workers, (count + grain - 1) / grain));
  std::vector<std::thread> pool;
  pool.reserve(used);
  const std::size_t chunk = (count + used - 1) / used;
  for (unsigned w = 0; w < used; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace stagegames
