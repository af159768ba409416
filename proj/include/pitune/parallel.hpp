#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pitune {

/*! \brief Worker count: PI_TUNE_THREADS if set (0 = auto), else hardware
    concurrency, else 1. */
[[nodiscard]] inline unsigned thread_budget() {
  if (const char* env = std::getenv("PI_TUNE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

/*! \brief Run body(i) for i in [0, n) across the thread budget.

  Work items must be independent and write only to their own index of any
  shared output, which keeps results identical for every thread count;
  reductions are then done sequentially by the caller.  The first exception
  thrown by a work item is rethrown here after all threads join.
*/
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t budget = thread_budget();
  if (n <= 1 || budget <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(budget, n);
  std::atomic<std::size_t> next{0};
  std::mutex err_mtx;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mtx);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t k = 0; k < nt; ++k) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace pitune
