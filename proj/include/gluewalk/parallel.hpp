#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace gluewalk {

/// Splits [0, count) into at most `threads` contiguous chunks and calls
/// body(begin, end) on each, one chunk per thread. Chunk boundaries depend
/// only on (count, threads), so results are reproducible for a fixed thread
/// count as long as `body` writes disjoint outputs.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = count / workers;
  const std::size_t extra = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
    if (w + 1 == workers) {
      body(begin, end);
    } else {
      pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    begin = end;
  }
}

/// GLUEWALK_THREADS if set to a positive integer, else the hardware thread
/// count.
[[nodiscard]] inline unsigned default_thread_count() {
  if (const char* env = std::getenv("GLUEWALK_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gluewalk
