#pragma once

#include <cstdint>

#include "zk/field.hpp"

namespace zk {

// Smooth random field: independent complex Gaussian coefficients under a
// Gaussian spectral envelope of width `k_frac * kmax`, normalized to unit
// L2 norm. Deterministic for a given seed.
RealField random_schwartz_field(GridPtr grid, std::uint64_t seed,
                                double k_frac = 1.0 / 3.0);

// Rough field with the borderline H^s power-law spectrum
// |u_hat(k)| ~ (1+|k|)^{-(s+3/2)} and random phases, normalized to the
// requested L2 norm. Lies in H^r exactly for r < s.
RealField synthetic_sobolev_field(GridPtr grid, double s, std::uint64_t seed,
                                  double l2_amplitude = 1.0);

// Centered Gaussian bump amplitude * exp(-|z|^2 / (2 width^2)).
RealField gaussian_bump(GridPtr grid, double amplitude, double width);

}  // namespace zk
