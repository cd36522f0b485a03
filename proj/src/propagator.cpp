#include "zk/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace zk {

SpectralField apply_group(const SpectralField& U0, double t) {
  const Grid3& g = *U0.grid;
  SpectralField V(U0.grid);
  for (int i = 0; i < g.nx(); ++i) {
    // The symbol is odd in kx, so the self-aliased x-Nyquist plane cannot
    // rotate and stay the spectrum of a real field; freeze it, matching the
    // zeroed Nyquist of odd-order derivatives. |multiplier| = 1 throughout.
    const double kx = (i == g.nx() / 2) ? 0.0 : g.kx()[i];
    for (int j = 0; j < g.ny1(); ++j) {
      const double ky1 = g.ky1()[j];
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double ky2 = g.ky2()[m];
        const double phase = t * kx * (g.kx()[i] * g.kx()[i] + ky1 * ky1 +
                                       ky2 * ky2);
        const std::size_t idx = g.cidx(i, j, m);
        V.c[idx] = U0.c[idx] *
                   std::complex<double>(std::cos(phase), std::sin(phase));
      }
    }
  }
  return V;
}

SpectralField apply_parabolic(const SpectralField& U0, double t, double eta) {
  if (t < 0.0)
    throw std::invalid_argument("apply_parabolic: semigroup only, t >= 0");
  if (!(eta > 0.0))
    throw std::invalid_argument("apply_parabolic: eta must be positive");
  const Grid3& g = *U0.grid;
  SpectralField V(U0.grid);
  for (int i = 0; i < g.nx(); ++i) {
    const double kx2 = g.kx()[i] * g.kx()[i];
    for (int j = 0; j < g.ny1(); ++j) {
      const double ky12 = g.ky1()[j] * g.ky1()[j];
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double k2 = kx2 + ky12 + g.ky2()[m] * g.ky2()[m];
        const std::size_t idx = g.cidx(i, j, m);
        V.c[idx] = U0.c[idx] * std::exp(-eta * t * k2 * k2);
      }
    }
  }
  return V;
}

namespace {

// 2-point Gauss-Legendre abscissae on [-1,1].
constexpr double kGaussNode = 0.5773502691896257645;

}  // namespace

std::vector<double> duhamel_nodes(QuadRule rule, double t, int n) {
  if (n < 2) throw std::invalid_argument("duhamel_nodes: need n >= 2");
  std::vector<double> ts;
  if (rule == QuadRule::trapezoid) {
    ts.resize(n);
    for (int i = 0; i < n; ++i) ts[i] = t * i / (n - 1);
  } else {
    if (n % 2 != 0)
      throw std::invalid_argument("duhamel_nodes: gauss4 needs an even count");
    const int panels = n / 2;
    const double h = t / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = (p + 0.5) * h;
      ts.push_back(c - 0.5 * h * kGaussNode);
      ts.push_back(c + 0.5 * h * kGaussNode);
    }
  }
  return ts;
}

SpectralField duhamel_integral(std::span<const double> times,
                               std::span<const SpectralField> samples,
                               double t, QuadRule rule) {
  if (times.size() != samples.size() || times.empty())
    throw std::invalid_argument("duhamel_integral: bad sample list");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("duhamel_integral: nodes must increase");
  const double tol = 1e-9 * (1.0 + std::abs(t));

  std::vector<double> weights(times.size(), 0.0);
  if (rule == QuadRule::trapezoid) {
    if (std::abs(times.front()) > tol || std::abs(times.back() - t) > tol)
      throw std::invalid_argument(
          "duhamel_integral: trapezoid nodes must cover [0, t]");
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      const double h = times[i + 1] - times[i];
      weights[i] += 0.5 * h;
      weights[i + 1] += 0.5 * h;
    }
  } else {
    const auto expected =
        duhamel_nodes(QuadRule::gauss4, t, static_cast<int>(times.size()));
    for (std::size_t i = 0; i < times.size(); ++i)
      if (std::abs(times[i] - expected[i]) > tol)
        throw std::invalid_argument(
            "duhamel_integral: gauss4 samples must sit at the rule's nodes");
    const double h = t / (static_cast<double>(times.size()) / 2);
    for (auto& w : weights) w = 0.5 * h;
  }

  SpectralField acc(samples.front().grid);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (weights[i] == 0.0) continue;
    SpectralField term = apply_group(samples[i], t - times[i]);
    for (std::size_t q = 0; q < acc.c.size(); ++q)
      acc.c[q] += weights[i] * term.c[q];
  }
  return acc;
}

}  // namespace zk
