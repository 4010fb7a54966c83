#pragma once

// Deterministic work distribution. Workers write into preallocated slots
// indexed by task id, so results are identical for any worker count.

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace conekit {

namespace detail {
inline int& worker_count_ref() {
  static int n = 1;
  return n;
}
}  // namespace detail

inline int worker_count() { return detail::worker_count_ref(); }

inline void set_worker_count(int n) { detail::worker_count_ref() = n < 1 ? 1 : n; }

/// Runs f(0), ..., f(n-1) on worker_count() threads. f(i) must only touch
/// state owned by index i; ordering across indices is not observable.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  int workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::size_t next = 0;
  std::mutex mu;
  std::exception_ptr err;
  auto body = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= n || err) return;
        i = next++;
      }
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int spawn = static_cast<int>(n < static_cast<std::size_t>(workers) ? n : static_cast<std::size_t>(workers));
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace conekit
