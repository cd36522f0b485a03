#pragma once

#include "zk/field.hpp"
#include "zk/spectral.hpp"

namespace zk {

// Frequency-side mollifier. sharp_cutoff keeps the ball |k| <= K(eps) with
// K the largest dyadic edge 2^j <= 1/eps (plain ball 1/eps when 1/eps < 1),
// so it is a projector and composes exactly with the dyadic blocks. gaussian
// uses the multiplier exp(-eps^2 |k|^2 / 2). Both have magnitude <= 1.
struct MollifierSpec {
  enum class Kind { sharp_cutoff, gaussian };
  double epsilon;
  Kind kind = Kind::sharp_cutoff;
};

double mollifier_cutoff(double epsilon);

SpectralField mollify(const SpectralField& U, const MollifierSpec& m);
RealField mollify(const RealField& u, const MollifierSpec& m);

// The flux d/dx (u^{7/3}) with the power taken through the real cube root
// and evaluated on a grid oversampled by `pad`.
RealField flux(const RealField& u, double pad);
SpectralField flux_hat(const SpectralField& U, double pad);

// d/dx ( eta_eps * ( (eta_eps * u)^{7/3} ) ): inner mollify, power, outer
// mollify, in that order.
RealField mollified_flux(const RealField& u, const MollifierSpec& m,
                         double pad);
SpectralField mollified_flux_hat(const SpectralField& U,
                                 const MollifierSpec& m, double pad);

// u^{7/3} evaluated with oversampling, returned in spectral form; shared by
// the flux variants.
SpectralField power_73_hat(const SpectralField& U, double pad);

}  // namespace zk
