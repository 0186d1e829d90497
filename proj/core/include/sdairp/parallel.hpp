#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sdairp {

// Runs fn(i) for i in [0, n). Work items write to disjoint slots, so the
// result never depends on the schedule. threads <= 1 runs inline.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += nt) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sdairp
