#pragma once

#include <cstddef>
#include <span>

namespace zk {

// Fixed-order pairwise reduction. Every norm, inner product and CSV statistic
// in the library goes through this so that results do not depend on chunking
// or thread count.
template <class F>
double pairwise_reduce(std::size_t lo, std::size_t hi, F&& term) {
  if (hi - lo <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_reduce(lo, mid, term) + pairwise_reduce(mid, hi, term);
}

double pairwise_sum(std::span<const double> xs);

}  // namespace zk
