#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sievemoments {

// Evaluates fn(chunk) for chunk in [0, chunks) on up to `threads` workers and
// returns the per-chunk results in chunk order. Callers reduce the vector
// sequentially, so the outcome does not depend on the thread count.
template <class Result, class Fn>
std::vector<Result> map_chunks(std::size_t chunks, unsigned threads, Fn&& fn) {
  std::vector<Result> out(chunks);
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) out[c] = fn(c);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace sievemoments
