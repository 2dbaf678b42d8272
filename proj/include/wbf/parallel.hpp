#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wbf {

/// Runs body(lo, hi) over contiguous chunks of [begin, end). Chunk
/// boundaries depend only on the range, so results that are written per
/// index never depend on the worker count.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, int threads, Body&& body, std::size_t chunk = 64) {
  if (end <= begin) return;
  const std::size_t n = end - begin;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), chunks);
  if (workers <= 1) {
    body(begin, end);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) {
          const std::size_t lo = begin + c * chunk;
          body(lo, std::min(end, lo + chunk));
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace wbf
