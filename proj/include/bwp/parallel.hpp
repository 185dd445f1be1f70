#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bwp {

// Summation discipline for parallel reductions.
//   Strict: per-task partial results combined in task index order with
//           compensated summation; output is independent of thread count.
//   Fast:   plain summation inside tasks; may drift by ~1e-12 relative.
enum class ExecMode { Strict, Fast };

struct ExecPolicy {
  unsigned threads = 1;
  ExecMode mode = ExecMode::Strict;
};

// Runs body(i) for i in [0, n) on up to `threads` workers. Tasks are claimed
// dynamically; callers write into per-task slots so results never depend on
// scheduling. The first exception thrown by any task is rethrown.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace bwp
