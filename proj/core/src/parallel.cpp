#include "cml/parallel.hpp"

#include <atomic>
#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cml::par {

int thread_count() {
  if (const char* env = std::getenv("CML_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(
    std::int64_t n, std::int64_t chunk_size,
    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (chunk_size <= 0) chunk_size = n;
  const std::int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
  const int workers =
      static_cast<int>(std::min<std::int64_t>(thread_count(), n_chunks));

  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t begin = c * chunk_size;
    const std::int64_t end = std::min(n, begin + chunk_size);
    fn(begin, end, c);
  };

  if (workers <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= n_chunks) return;
        run_chunk(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cml::par
