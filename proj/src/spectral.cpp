#include "zk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zk/fft.hpp"
#include "zk/reduce.hpp"

namespace zk {

std::size_t first_nonfinite(const RealField& u) {
  for (std::size_t i = 0; i < u.v.size(); ++i)
    if (!std::isfinite(u.v[i])) return i;
  return field_npos;
}

namespace {

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!(*a == *b)) throw std::invalid_argument("fields live on different grids");
}

std::string decode_index(const Grid3& g, std::size_t idx) {
  const int k = static_cast<int>(idx % g.ny2());
  const int j = static_cast<int>((idx / g.ny2()) % g.ny1());
  const int i = static_cast<int>(idx / (static_cast<std::size_t>(g.ny1()) * g.ny2()));
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," +
         std::to_string(k) + ")";
}

}  // namespace

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  RealField r(a.grid);
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

RealField operator-(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  RealField r(a.grid);
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] - b.v[i];
  return r;
}

RealField operator*(double s, const RealField& a) {
  RealField r(a.grid);
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = s * a.v[i];
  return r;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  SpectralField r(a.grid);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid);
  SpectralField r(a.grid);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

SpectralField operator*(double s, const SpectralField& a) {
  SpectralField r(a.grid);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = s * a.c[i];
  return r;
}

double real_power(double u, Rational p) {
  if (p.den == 1) {
    double r = 1.0;
    const double base = u;
    for (int i = 0; i < p.num; ++i) r *= base;
    return r;
  }
  if (p.den != 3)
    throw std::invalid_argument("real_power: denominator must be 1 or 3");
  const double a = std::pow(std::abs(u), p.value());
  return (p.num % 2 != 0 && u < 0.0) ? -a : a;
}

SpectralField forward_transform(const RealField& u) {
  const std::size_t bad = first_nonfinite(u);
  if (bad != field_npos)
    throw std::domain_error("forward_transform: non-finite value at index " +
                            decode_index(*u.grid, bad));
  SpectralField U(u.grid);
  fft::r2c(*u.grid, u.v.data(), U.c.data());
  const double scale = u.grid->cell_volume();
  for (auto& c : U.c) c *= scale;
  return U;
}

RealField inverse_transform(const SpectralField& U) {
  RealField u(U.grid);
  fft::c2r(*U.grid, U.c.data(), u.v.data());
  const double scale = 1.0 / U.grid->box_volume();
  for (auto& x : u.v) x *= scale;
  return u;
}

SpectralField spectral_derivative(const SpectralField& U, Axis axis,
                                  int order) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("spectral_derivative: unsupported order " +
                                std::to_string(order));
  const Grid3& g = *U.grid;
  SpectralField D(U.grid);
  const bool odd = order % 2 != 0;
  // (ik)^1 = ik, (ik)^2 = -k^2, (ik)^3 = -ik^3, (ik)^4 = k^4
  const double re_sign = (order == 2) ? -1.0 : 1.0;
  const double im_sign = (order == 1) ? 1.0 : -1.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny1(); ++j) {
      for (int m = 0; m < g.ny2_modes(); ++m) {
        double k = 0.0;
        bool nyq = false;
        switch (axis) {
          case Axis::x:
            k = g.kx()[i];
            nyq = (i == g.nx() / 2);
            break;
          case Axis::y1:
            k = g.ky1()[j];
            nyq = (j == g.ny1() / 2);
            break;
          case Axis::y2:
            k = g.ky2()[m];
            nyq = (m == g.ny2() / 2);
            break;
        }
        const std::size_t idx = g.cidx(i, j, m);
        if (odd && nyq) {
          D.c[idx] = 0.0;
          continue;
        }
        double kp = k;
        for (int q = 1; q < order; ++q) kp *= k;
        const std::complex<double> c = U.c[idx];
        if (odd)
          D.c[idx] = std::complex<double>(-im_sign * kp * c.imag(),
                                          im_sign * kp * c.real());
        else
          D.c[idx] = re_sign * kp * c;
      }
    }
  }
  return D;
}

GridPtr padded_grid(const Grid3& g, double pad) {
  auto scale = [pad](int n) {
    int m = static_cast<int>(std::ceil(pad * n));
    if (m % 2 != 0) ++m;
    return std::max(m, n);
  };
  return Grid3::make(scale(g.nx()), scale(g.ny1()), scale(g.ny2()), g.lx(),
                     g.ly1(), g.ly2());
}

namespace {

// Alias slots of a coarse full-axis index on a finer axis. Interior modes
// map to a single slot; the coarse Nyquist frequency splits across the
// +n/2 and -n/2 slots of the fine axis.
struct AliasSet {
  int idx[2];
  int count;
};

AliasSet alias_slots(int i, int n, int n_fine) {
  AliasSet a;
  if (i == n / 2 && n_fine > n) {
    a.idx[0] = n / 2;
    a.idx[1] = n_fine - n / 2;
    a.count = 2;
  } else {
    a.idx[0] = (i <= n / 2) ? i : i - n + n_fine;
    a.count = 1;
  }
  return a;
}

}  // namespace

SpectralField pad_embed(const SpectralField& U, GridPtr fine) {
  const Grid3& g = *U.grid;
  const Grid3& f = *fine;
  SpectralField V(std::move(fine));
  for (int i = 0; i < g.nx(); ++i) {
    const AliasSet ax = alias_slots(i, g.nx(), f.nx());
    for (int j = 0; j < g.ny1(); ++j) {
      const AliasSet ay = alias_slots(j, g.ny1(), f.ny1());
      for (int m = 0; m < g.ny2_modes(); ++m) {
        // The reduced axis keeps a single stored slot; its implicit
        // conjugate partner supplies the other Nyquist half.
        const bool nyq_y2 = (m == g.ny2() / 2) && (f.ny2() > g.ny2());
        const double w =
            (nyq_y2 ? 0.5 : 1.0) / (ax.count * ay.count);
        const std::complex<double> c = w * U.c[g.cidx(i, j, m)];
        for (int a = 0; a < ax.count; ++a)
          for (int b = 0; b < ay.count; ++b)
            V.c[f.cidx(ax.idx[a], ay.idx[b], m)] += c;
      }
    }
  }
  return V;
}

SpectralField pad_truncate(const SpectralField& U, GridPtr coarse) {
  const Grid3& f = *U.grid;
  const Grid3& g = *coarse;
  SpectralField V(std::move(coarse));
  for (int i = 0; i < g.nx(); ++i) {
    const AliasSet ax = alias_slots(i, g.nx(), f.nx());
    for (int j = 0; j < g.ny1(); ++j) {
      const AliasSet ay = alias_slots(j, g.ny1(), f.ny1());
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const bool nyq_y2 = (m == g.ny2() / 2) && (f.ny2() > g.ny2());
        std::complex<double> acc = 0.0;
        for (int a = 0; a < ax.count; ++a) {
          for (int b = 0; b < ay.count; ++b) {
            const int fi = ax.idx[a];
            const int fj = ay.idx[b];
            acc += U.c[f.cidx(fi, fj, m)];
            if (nyq_y2) {
              // Gather the implicit -Nyquist half from the conjugate
              // partner of the mirrored (x, y1) frequency.
              const int mi = (f.nx() - fi) % f.nx();
              const int mj = (f.ny1() - fj) % f.ny1();
              acc += std::conj(U.c[f.cidx(mi, mj, m)]);
            }
          }
        }
        V.c[g.cidx(i, j, m)] = acc;
      }
    }
  }
  return V;
}

RealField pointwise_power(const RealField& u, Rational p) {
  RealField r(u.grid);
  for (std::size_t i = 0; i < u.v.size(); ++i) r.v[i] = real_power(u.v[i], p);
  return r;
}

RealField dealias_pad_multiply(const RealField& u, Rational p, double pad) {
  if (pad < 1.0 || pad > 2.0)
    throw std::invalid_argument("dealias_pad_multiply: pad must be in [1,2]");
  if (pad == 1.0) return pointwise_power(u, p);
  GridPtr fine = padded_grid(*u.grid, pad);
  if (fine->nx() == u.grid->nx() && fine->ny1() == u.grid->ny1() &&
      fine->ny2() == u.grid->ny2())
    return pointwise_power(u, p);
  SpectralField U = forward_transform(u);
  RealField up = inverse_transform(pad_embed(U, fine));
  RealField wp = pointwise_power(up, p);
  return inverse_transform(pad_truncate(forward_transform(wp), u.grid));
}

double l2_norm_sq(const RealField& u) {
  const double w = u.grid->cell_volume();
  return w * pairwise_reduce(0, u.v.size(),
                             [&](std::size_t i) { return u.v[i] * u.v[i]; });
}

double l2_norm(const RealField& u) { return std::sqrt(l2_norm_sq(u)); }

double l2_norm_sq(const SpectralField& U) {
  const Grid3& g = *U.grid;
  const double w = 1.0 / g.box_volume();
  const int ny2m = g.ny2_modes();
  return w * pairwise_reduce(0, U.c.size(), [&](std::size_t i) {
    const int m = static_cast<int>(i % ny2m);
    return g.hermitian_weight(m) * std::norm(U.c[i]);
  });
}

double l2_norm(const SpectralField& U) { return std::sqrt(l2_norm_sq(U)); }

double inner(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid);
  const double w = a.grid->cell_volume();
  return w * pairwise_reduce(0, a.v.size(),
                             [&](std::size_t i) { return a.v[i] * b.v[i]; });
}

double integral(const RealField& u) {
  return u.grid->cell_volume() *
         pairwise_reduce(0, u.v.size(), [&](std::size_t i) { return u.v[i]; });
}

double max_abs(const RealField& u) {
  double m = 0.0;
  for (double x : u.v) m = std::max(m, std::abs(x));
  return m;
}

namespace {

template <class W>
double weighted_l2_sq(const SpectralField& U, W&& weight) {
  const Grid3& g = *U.grid;
  const double w = 1.0 / g.box_volume();
  const int ny2m = g.ny2_modes();
  const int ny1 = g.ny1();
  return w * pairwise_reduce(0, U.c.size(), [&](std::size_t idx) {
    const int m = static_cast<int>(idx % ny2m);
    const int j = static_cast<int>((idx / ny2m) % ny1);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(ny1) * ny2m));
    const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                      g.ky2()[m] * g.ky2()[m];
    return g.hermitian_weight(m) * weight(k2) * std::norm(U.c[idx]);
  });
}

}  // namespace

double hs_norm_direct(const SpectralField& U, double s) {
  return std::sqrt(weighted_l2_sq(U, [s](double k2) {
    return std::pow(1.0 + std::sqrt(k2), 2.0 * s);
  }));
}

double hs_norm_bessel(const SpectralField& U, double s) {
  return std::sqrt(
      weighted_l2_sq(U, [s](double k2) { return std::pow(1.0 + k2, s); }));
}

SpectralField bessel_potential(const SpectralField& U, double s) {
  const Grid3& g = *U.grid;
  SpectralField V(U.grid);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                          g.ky2()[m] * g.ky2()[m];
        const std::size_t idx = g.cidx(i, j, m);
        V.c[idx] = std::pow(1.0 + k2, 0.5 * s) * U.c[idx];
      }
  return V;
}

double spectral_tail_ratio(const SpectralField& U) {
  const Grid3& g = *U.grid;
  const double kcut = 0.5 * g.kmax_radial();
  const double kcut2 = kcut * kcut;
  const double total = weighted_l2_sq(U, [](double) { return 1.0; });
  if (total == 0.0) return 0.0;
  const double tail =
      weighted_l2_sq(U, [kcut2](double k2) { return k2 > kcut2 ? 1.0 : 0.0; });
  return tail / total;
}

void enforce_hermitian(SpectralField& U) {
  const Grid3& g = *U.grid;
  // On the two self-conjugate y2 planes the pairs ((i,j) , (-i,-j)) must be
  // conjugate; average them, and force the self-paired entries real.
  for (int m : {0, g.ny2() / 2}) {
    for (int i = 0; i < g.nx(); ++i) {
      const int ii = (g.nx() - i) % g.nx();
      for (int j = 0; j < g.ny1(); ++j) {
        const int jj = (g.ny1() - j) % g.ny1();
        const std::size_t a = g.cidx(i, j, m);
        const std::size_t b = g.cidx(ii, jj, m);
        if (a == b) {
          U.c[a] = std::complex<double>(U.c[a].real(), 0.0);
        } else if (a < b) {
          const std::complex<double> avg =
              0.5 * (U.c[a] + std::conj(U.c[b]));
          U.c[a] = avg;
          U.c[b] = std::conj(avg);
        }
      }
    }
  }
}

}  // namespace zk
