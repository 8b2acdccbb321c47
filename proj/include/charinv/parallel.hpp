#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace charinv {

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `jobs` threads. Each index is visited exactly once; the first exception
/// thrown by any chunk is rethrown after all threads join.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace charinv
