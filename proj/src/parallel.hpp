#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace editmine::detail {

// Run fn(0..n-1) across `workers` threads. Work stealing via a shared atomic
// counter; callers must make fn(i) independent of fn(j). The first exception
// thrown by any fn(i) is rethrown on the calling thread after all workers
// stop.
template <typename Fn>
void run_indexed(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  std::size_t w = workers < 1 ? 1 : static_cast<std::size_t>(workers);
  if (w > n) w = n;
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace editmine::detail
