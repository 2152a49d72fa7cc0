#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

#include "hope/linalg.hpp"

namespace hope::detail {

// Splits [0, n) into contiguous chunks, one per thread. `fn(begin, end)` must only write
// state owned by its own rows.
template <typename Fn>
void parallel_rows(std::size_t n, Fn&& fn, std::size_t min_rows_per_thread = 256) {
  const std::size_t threads =
      std::min<std::size_t>(num_threads(), std::max<std::size_t>(1, n / min_rows_per_thread));
  if (threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace hope::detail
