#pragma once

#include <cmath>
#include <cstdint>

#include "zk/field.hpp"
#include "zk/ground_state.hpp"
#include "zk/spectral.hpp"

namespace zktest {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / (std::abs(want) > 0 ? std::abs(want) : 1.0);
}

inline double max_abs_diff(const zk::RealField& a, const zk::RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

inline double max_abs_diff(const zk::SpectralField& a,
                           const zk::SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

// Band-limited random field: top third of each axis left empty so products
// and derivatives stay clean of Nyquist effects.
zk::RealField band_limited_field(zk::GridPtr grid, std::uint64_t seed,
                                 double amplitude = 1.0);

// Process-wide cache; Petviashvili solves are too slow to repeat per test.
const zk::GroundState& shared_ground_state(int n, double box);

}  // namespace zktest
