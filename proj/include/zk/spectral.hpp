#pragma once

#include <complex>

#include "zk/field.hpp"
#include "zk/grid.hpp"

namespace zk {

enum class Axis { x, y1, y2 };

// Exponent p = num/den with den in {1, 3}. Fractional powers of negative
// arguments go through the real cube root: odd numerator gives an odd
// function, even numerator an even one. This is the unique continuous
// convention under which d/du (3/10) u^{10/3} = u^{7/3}.
struct Rational {
  int num;
  int den;
  double value() const { return static_cast<double>(num) / den; }
};

double real_power(double u, Rational p);

// Forward transform carries the cell volume so that the coefficients
// approximate the continuum Fourier integral and Parseval holds exactly
// against the physical quadrature weights. Rejects non-finite input.
SpectralField forward_transform(const RealField& u);
RealField inverse_transform(const SpectralField& U);

// Coefficient at k multiplied by (i k_axis)^order, order <= 4. Odd orders
// zero the Nyquist mode on the differentiated axis to preserve realness.
SpectralField spectral_derivative(const SpectralField& U, Axis axis,
                                  int order);

// Pointwise fractional power evaluated on a grid oversampled by `pad` per
// axis and truncated back; pad = 1 is plain pointwise evaluation.
RealField dealias_pad_multiply(const RealField& u, Rational p, double pad);
RealField pointwise_power(const RealField& u, Rational p);

GridPtr padded_grid(const Grid3& g, double pad);
SpectralField pad_embed(const SpectralField& U, GridPtr fine);
SpectralField pad_truncate(const SpectralField& U, GridPtr coarse);

double l2_norm(const RealField& u);
double l2_norm_sq(const RealField& u);
double l2_norm(const SpectralField& U);
double l2_norm_sq(const SpectralField& U);
double inner(const RealField& a, const RealField& b);
double integral(const RealField& u);
double max_abs(const RealField& u);

// H^s by direct quadrature of the defining integral with weight (1+|k|)^{2s}.
double hs_norm_direct(const SpectralField& U, double s);
// Bessel-potential variant, weight (1+|k|^2)^s.
double hs_norm_bessel(const SpectralField& U, double s);
// <grad>^s multiplier (1+|k|^2)^{s/2}.
SpectralField bessel_potential(const SpectralField& U, double s);

// Energy fraction carried by the top octave |k| > kmax/2; used to monitor
// how badly a non-polynomial power leaks into the unresolved range.
double spectral_tail_ratio(const SpectralField& U);

// Repair the internal conjugate pairs on the y2 = 0 and y2 = Nyquist planes
// so the coefficients describe a real field. Needed only for synthesized
// spectra; transform output satisfies this already.
void enforce_hermitian(SpectralField& U);

}  // namespace zk
