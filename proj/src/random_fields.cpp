#include "zk/random_fields.hpp"

#include <cmath>
#include <random>

#include "zk/spectral.hpp"

namespace zk {

namespace {

template <class Envelope>
RealField random_spectrum_field(GridPtr grid, std::uint64_t seed,
                                Envelope&& env, double l2_target) {
  const Grid3& g = *grid;
  SpectralField U(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double k = std::sqrt(g.kx()[i] * g.kx()[i] +
                                   g.ky1()[j] * g.ky1()[j] +
                                   g.ky2()[m] * g.ky2()[m]);
        const double a = env(k);
        U.c[g.cidx(i, j, m)] =
            std::complex<double>(a * gauss(rng), a * gauss(rng));
      }
  enforce_hermitian(U);
  RealField u = inverse_transform(U);
  const double n = l2_norm(u);
  if (n > 0.0)
    for (auto& v : u.v) v *= l2_target / n;
  return u;
}

}  // namespace

RealField random_schwartz_field(GridPtr grid, std::uint64_t seed,
                                double k_frac) {
  const double sigma = k_frac * grid->kmax_radial();
  return random_spectrum_field(
      std::move(grid), seed,
      [sigma](double k) { return std::exp(-k * k / (2.0 * sigma * sigma)); },
      1.0);
}

RealField synthetic_sobolev_field(GridPtr grid, double s, std::uint64_t seed,
                                  double l2_amplitude) {
  const double expo = s + 1.5;
  return random_spectrum_field(
      std::move(grid), seed,
      [expo](double k) { return std::pow(1.0 + k, -expo); }, l2_amplitude);
}

RealField gaussian_bump(GridPtr grid, double amplitude, double width) {
  const Grid3& g = *grid;
  RealField u(grid);
  const double iw2 = 1.0 / (2.0 * width * width);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int k = 0; k < g.ny2(); ++k) {
        const double r2 =
            g.x(i) * g.x(i) + g.y1(j) * g.y1(j) + g.y2(k) * g.y2(k);
        u.at(i, j, k) = amplitude * std::exp(-r2 * iw2);
      }
  return u;
}

}  // namespace zk
