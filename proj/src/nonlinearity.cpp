#include "zk/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace zk {

double mollifier_cutoff(double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("mollifier: epsilon must be positive");
  const double inv = 1.0 / epsilon;
  if (inv < 1.0) return inv;
  return std::exp2(std::floor(std::log2(inv)));
}

SpectralField mollify(const SpectralField& U, const MollifierSpec& m) {
  const Grid3& g = *U.grid;
  SpectralField V(U.grid);
  if (m.kind == MollifierSpec::Kind::sharp_cutoff) {
    const double kcut2 = mollifier_cutoff(m.epsilon) * mollifier_cutoff(m.epsilon);
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny1(); ++j)
        for (int q = 0; q < g.ny2_modes(); ++q) {
          const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                            g.ky2()[q] * g.ky2()[q];
          const std::size_t idx = g.cidx(i, j, q);
          V.c[idx] = (k2 <= kcut2) ? U.c[idx] : 0.0;
        }
  } else {
    const double e2 = 0.5 * m.epsilon * m.epsilon;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny1(); ++j)
        for (int q = 0; q < g.ny2_modes(); ++q) {
          const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                            g.ky2()[q] * g.ky2()[q];
          const std::size_t idx = g.cidx(i, j, q);
          V.c[idx] = std::exp(-e2 * k2) * U.c[idx];
        }
  }
  return V;
}

RealField mollify(const RealField& u, const MollifierSpec& m) {
  return inverse_transform(mollify(forward_transform(u), m));
}

SpectralField power_73_hat(const SpectralField& U, double pad) {
  constexpr Rational p{7, 3};
  if (pad < 1.0 || pad > 2.0)
    throw std::invalid_argument("power_73_hat: pad must be in [1,2]");
  GridPtr fine = padded_grid(*U.grid, pad);
  if (fine->nx() == U.grid->nx() && fine->ny1() == U.grid->ny1() &&
      fine->ny2() == U.grid->ny2())
    return forward_transform(pointwise_power(inverse_transform(U), p));
  RealField up = inverse_transform(pad_embed(U, fine));
  return pad_truncate(forward_transform(pointwise_power(up, p)), U.grid);
}

SpectralField flux_hat(const SpectralField& U, double pad) {
  return spectral_derivative(power_73_hat(U, pad), Axis::x, 1);
}

RealField flux(const RealField& u, double pad) {
  return inverse_transform(flux_hat(forward_transform(u), pad));
}

SpectralField mollified_flux_hat(const SpectralField& U,
                                 const MollifierSpec& m, double pad) {
  SpectralField inner_smoothed = mollify(U, m);
  SpectralField powered = power_73_hat(inner_smoothed, pad);
  return spectral_derivative(mollify(powered, m), Axis::x, 1);
}

RealField mollified_flux(const RealField& u, const MollifierSpec& m,
                         double pad) {
  return inverse_transform(mollified_flux_hat(forward_transform(u), m, pad));
}

}  // namespace zk
