#include "curvflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace curvflow {

int worker_count() {
  int n = 0;
  if (const char* env = std::getenv("CURVFLOW_THREADS")) {
    n = std::atoi(env);
  }
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return std::clamp(n, 1, 64);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = static_cast<std::size_t>(worker_count());
  // spawn cost dwarfs the work on small ranges; chunking never affects values
  if (workers == 1 || count < 4096) {
    body(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(w * chunk, count);
    const std::size_t e = std::min(b + chunk, count);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace curvflow
