#include "finiteshape/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace finiteshape {
namespace {
std::atomic<std::size_t> g_threads{0};
}

void set_thread_count(std::size_t threads) { g_threads = threads; }

std::size_t thread_count() {
  std::size_t t = g_threads;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min(thread_count(), n / 256 + 1);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace finiteshape
