#pragma once

// Deterministic fan-out: every item writes into its own slot, and reductions
// run afterwards in index order, so results do not depend on worker count.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace affgeo {

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, int workers, F&& f) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < count; i += step) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nw = static_cast<std::size_t>(std::max(1, workers));
  if (nw == 1 || count < 2) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    const std::size_t used = std::min(nw, count);
    pool.reserve(used);
    for (std::size_t w = 0; w < used; ++w) pool.emplace_back(run, w, used);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Pairwise summation in a fixed tree order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace affgeo
