#pragma once

#include <span>
#include <vector>

#include "zk/field.hpp"

namespace zk {

// Dispersive symbol: the free flow multiplies the coefficient at (kx, ky)
// by exp(i t kx (kx^2 + |ky|^2)). Unitary for every real t. The x-Nyquist
// plane is frozen: its rotation is not representable on a real grid, the
// same obstruction that zeroes the Nyquist mode of odd derivatives.
SpectralField apply_group(const SpectralField& U0, double t);

// Fourth-order dissipative semigroup, multiplier exp(-eta t |k|^4), t >= 0.
SpectralField apply_parabolic(const SpectralField& U0, double t, double eta);

enum class QuadRule { trapezoid, gauss4 };

// Sample times at which the integrand must be supplied for a given rule:
// trapezoid uses n equispaced nodes including both endpoints; gauss4 uses
// the two-point Gauss-Legendre abscissae of n/2 equal panels (n even).
std::vector<double> duhamel_nodes(QuadRule rule, double t, int n);

// Quadrature of int_0^t U(t-t') F(t') dt' with the propagator applied
// exactly at each node. Sample times must match the layout produced by
// duhamel_nodes for the chosen rule; trapezoid additionally accepts any
// strictly increasing node set starting at 0 and ending at t.
SpectralField duhamel_integral(std::span<const double> times,
                               std::span<const SpectralField> samples,
                               double t, QuadRule rule);

}  // namespace zk
