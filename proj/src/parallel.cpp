#include "aatomo/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aatomo {

unsigned worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AATOMO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return std::min(hw, static_cast<unsigned>(v));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  // Small chunks keep the load balanced when per-item cost varies with position.
  const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
  std::size_t next = 0;
  std::mutex lock;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t begin;
      {
        std::lock_guard guard(lock);
        if (next >= n || failure) return;
        begin = next;
        next = std::min(n, next + chunk);
      }
      try {
        body(begin, std::min(n, begin + chunk));
      } catch (...) {
        std::lock_guard guard(lock);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace aatomo
