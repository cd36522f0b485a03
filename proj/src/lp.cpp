#include "zk/lp.hpp"

#include <cmath>
#include <stdexcept>

#include "zk/reduce.hpp"

namespace zk {

DyadicDecomposition::DyadicDecomposition(GridPtr grid)
    : grid_(std::move(grid)) {
  const Grid3& g = *grid_;
  const double kmax = g.kmax_radial();
  j_max_ = 0;
  while (std::exp2(j_max_) < kmax) ++j_max_;
  block_of_.resize(g.mode_count());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double k = std::sqrt(g.kx()[i] * g.kx()[i] +
                                   g.ky1()[j] * g.ky1()[j] +
                                   g.ky2()[m] * g.ky2()[m]);
        int b = 0;
        if (k > 1.0) b = static_cast<int>(std::ceil(std::log2(k)));
        block_of_[g.cidx(i, j, m)] = static_cast<std::int8_t>(b);
      }
}

SpectralField DyadicDecomposition::project(const SpectralField& U,
                                           int j) const {
  if (!(*U.grid == *grid_))
    throw std::invalid_argument("lp_project: decomposition grid mismatch");
  if (j < 0 || j > j_max_)
    throw std::out_of_range("lp_project: block index out of range");
  SpectralField V(U.grid);
  for (std::size_t q = 0; q < U.c.size(); ++q)
    if (block_of_[q] == j) V.c[q] = U.c[q];
  return V;
}

std::vector<double> DyadicDecomposition::block_l2(
    const SpectralField& U) const {
  const Grid3& g = *grid_;
  const int ny2m = g.ny2_modes();
  std::vector<double> acc(j_max_ + 1, 0.0);
  // Per-block pairwise reduction keeps the summation order fixed.
  for (int b = 0; b <= j_max_; ++b) {
    acc[b] = pairwise_reduce(0, U.c.size(), [&](std::size_t q) {
      if (block_of_[q] != b) return 0.0;
      const int m = static_cast<int>(q % ny2m);
      return g.hermitian_weight(m) * std::norm(U.c[q]);
    });
  }
  const double w = 1.0 / g.box_volume();
  for (auto& a : acc) a = std::sqrt(w * a);
  return acc;
}

SpectralField lp_project(const SpectralField& U, int j) {
  return DyadicDecomposition(U.grid).project(U, j);
}

double lp_sobolev_norm(const SpectralField& U, double s) {
  DyadicDecomposition dec(U.grid);
  const std::vector<double> bl = dec.block_l2(U);
  double sum = 0.0;
  for (int j = 1; j <= dec.j_max(); ++j)
    sum += std::exp2(2.0 * s * j) * bl[j] * bl[j];
  return bl[0] + std::sqrt(sum);
}

}  // namespace zk
