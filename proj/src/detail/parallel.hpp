#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sdl::detail {

// Splits [0, n_items) into `threads` contiguous ranges and runs
// fn(worker, first, last) on each; the first exception is rethrown.
// Range boundaries depend only on (n_items, worker count).
template <class Fn>
void for_each_worker(std::size_t n_items, unsigned threads, Fn&& fn) {
  if (n_items == 0) return;
  const auto workers = static_cast<unsigned>(std::clamp<std::size_t>(std::max(threads, 1u), 1, n_items));
  std::vector<std::exception_ptr> failures(workers);
  const auto run = [&](unsigned w) {
    try {
      fn(w, n_items * w / workers, n_items * (w + 1) / workers);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
}

inline unsigned worker_count(std::size_t n_items, unsigned threads) {
  return static_cast<unsigned>(std::clamp<std::size_t>(std::max(threads, 1u), 1, std::max<std::size_t>(n_items, 1)));
}

}  // namespace sdl::detail
