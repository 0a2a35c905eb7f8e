#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace phlab {

/// Number of worker threads to use; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, count) on a pool of threads.
///
/// Work items must write to disjoint, index-addressed outputs; callers reduce
/// afterwards in index order so results do not depend on the thread count. If
/// several items throw, the exception of the smallest index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Pairwise (cascade) summation in a fixed order.
template <typename It>
double pairwise_sum(It first, It last) {
  const auto n = std::distance(first, last);
  if (n <= 8) {
    double s = 0.0;
    for (; first != last; ++first) s += *first;
    return s;
  }
  It mid = first;
  std::advance(mid, n / 2);
  return pairwise_sum(first, mid) + pairwise_sum(mid, last);
}

template <typename Range>
double pairwise_sum(const Range& r) {
  return pairwise_sum(std::begin(r), std::end(r));
}

}  // namespace phlab
