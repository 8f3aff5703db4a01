#include "horocvx/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>
#include <vector>

namespace horocvx {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double sphere_area(int n) {
  if (n == 1) return 2.0 * std::numbers::pi;
  if (n == 2) return 4.0 * std::numbers::pi;
  throw InvalidArgument("sphere dimension must be 1 or 2");
}

int worker_count() {
  const char* env = std::getenv("HOROCVX_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return std::max(1, v);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  int workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace horocvx
