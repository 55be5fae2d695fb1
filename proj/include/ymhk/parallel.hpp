#pragma once

// Data-parallel loops over lattice sites and a fixed-topology pairwise sum.
//
// Element-wise maps may be split over workers freely because every output
// slot is written by exactly one index. Reductions never accumulate across
// workers: per-index contributions are materialized first and then summed
// with pairwise_sum, whose tree depends only on the length of the input.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace ymhk {

namespace detail {
inline std::atomic<int>& worker_count() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

inline void set_workers(int n) { detail::worker_count().store(std::max(1, n)); }
inline int workers() { return detail::worker_count().load(); }

/// Calls body(i) for i in [0, n). Work is chunked contiguously per worker.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto w = static_cast<std::size_t>(workers());
  constexpr std::size_t min_chunk = 256;
  if (w <= 1 || n < 2 * min_chunk) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t nchunks = std::min(w, n / min_chunk);
  const std::size_t chunk = (n + nchunks - 1) / nchunks;
  std::vector<std::jthread> pool;
  pool.reserve(nchunks - 1);
  for (std::size_t c = 1; c < nchunks; ++c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, chunk); ++i) body(i);
}

/// Pairwise summation with a tree fixed by the input length alone.
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t leaf = 8;
  if (v.size() <= leaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Sum of f(i) over [0, n), evaluated in parallel and reduced pairwise.
template <typename F>
double parallel_sum(std::size_t n, F&& f) {
  std::vector<double> parts(n);
  parallel_for(n, [&](std::size_t i) { parts[i] = f(i); });
  return pairwise_sum(parts);
}

/// Max of nonnegative f(i) over [0, n); returns 0 for n == 0.
template <typename F>
double parallel_max(std::size_t n, F&& f) {
  std::vector<double> parts(n);
  parallel_for(n, [&](std::size_t i) { parts[i] = f(i); });
  double m = 0.0;
  for (double x : parts) m = std::max(m, x);
  return m;
}

}  // namespace ymhk
