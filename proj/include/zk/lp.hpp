#pragma once

#include <cstdint>
#include <vector>

#include "zk/field.hpp"

namespace zk {

// Sharp dyadic decomposition of the retained modes: block 0 holds |k| <= 1,
// block j > 0 holds |k| in (2^{j-1}, 2^j]. The indicator masks partition the
// modes exactly, so telescoping and per-block Plancherel are exact in
// floating point.
class DyadicDecomposition {
 public:
  explicit DyadicDecomposition(GridPtr grid);

  int j_max() const { return j_max_; }
  const GridPtr& grid() const { return grid_; }
  // Block index of each retained mode, flattened spectral layout.
  const std::vector<std::int8_t>& block_of() const { return block_of_; }

  SpectralField project(const SpectralField& U, int j) const;
  // L2 norm of every block at once (one pass over the modes).
  std::vector<double> block_l2(const SpectralField& U) const;

 private:
  GridPtr grid_;
  int j_max_;
  std::vector<std::int8_t> block_of_;
};

SpectralField lp_project(const SpectralField& U, int j);

// Littlewood-Paley Sobolev norm
//   ||Delta_0 u||_2 + ( sum_{j>0} 2^{2sj} ||Delta_j u||_2^2 )^{1/2}.
double lp_sobolev_norm(const SpectralField& U, double s);

}  // namespace zk
