#include "qesurf/core.hpp"

#include <thread>
#include <vector>

namespace qesurf {

int max_threads() {
  const char* env = std::getenv("QESURF_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  if (n < 1) return 1;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  return std::min(n, hw);
}

void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& fn) {
  if (n <= 0) return;
  int nt = max_threads();
  if (nt <= 1 || n < 128) {
    fn(0, n);
    return;
  }
  std::ptrdiff_t chunk = (n + nt - 1) / nt;
  std::vector<std::thread> workers;
  for (std::ptrdiff_t beg = 0; beg < n; beg += chunk) {
    std::ptrdiff_t end = std::min(beg + chunk, n);
    workers.emplace_back(fn, beg, end);
  }
  for (auto& w : workers) w.join();
}

}  // namespace qesurf
