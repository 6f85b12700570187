#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chol {

/// Worker count: CHOLESTERIC_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs f(i) for i in [0, n) over contiguous chunks. Each index is visited
/// exactly once, so results written per index do not depend on the thread count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (nt <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
    pool.emplace_back([lo, hi, t, &f, &errors] {
      try {
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace chol
