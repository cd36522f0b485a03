#include "zk/reduce.hpp"

namespace zk {

double pairwise_sum(std::span<const double> xs) {
  return pairwise_reduce(0, xs.size(), [&](std::size_t i) { return xs[i]; });
}

}  // namespace zk
