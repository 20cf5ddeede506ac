#include "trisys/par.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace trisys {

int worker_count() {
  static int cached = [] {
    if (const char* env = std::getenv("TF_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

void parallel_chunks(int64_t total,
                     const std::function<void(int64_t, int64_t, int)>& fn) {
  if (total <= 0) return;
  int workers = std::min<int64_t>(worker_count(), total);
  if (workers <= 1) {
    fn(0, total, 0);
    return;
  }
  int64_t chunk = (total + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    int64_t begin = w * chunk;
    int64_t end = std::min<int64_t>(begin + chunk, total);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace trisys
