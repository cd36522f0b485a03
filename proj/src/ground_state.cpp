#include "zk/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "zk/nonlinearity.hpp"
#include "zk/norms.hpp"
#include "zk/reduce.hpp"
#include "zk/spectral.hpp"

namespace zk {

namespace {

constexpr Rational kP73{7, 3};

double grad_l2_sq(const SpectralField& U) {
  double acc = 0.0;
  for (Axis ax : {Axis::x, Axis::y1, Axis::y2})
    acc += l2_norm_sq(spectral_derivative(U, ax, 1));
  return acc;
}

// <(1-Delta)u, u> and the inverse multiplier, both in k-space.
double h1_pairing(const SpectralField& U) {
  const Grid3& g = *U.grid;
  const int ny2m = g.ny2_modes();
  const int ny1 = g.ny1();
  const double w = 1.0 / g.box_volume();
  return w * pairwise_reduce(0, U.c.size(), [&](std::size_t idx) {
    const int m = static_cast<int>(idx % ny2m);
    const int j = static_cast<int>((idx / ny2m) % ny1);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(ny1) * ny2m));
    const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                      g.ky2()[m] * g.ky2()[m];
    return g.hermitian_weight(m) * (1.0 + k2) * std::norm(U.c[idx]);
  });
}

SpectralField helmholtz_inverse(const SpectralField& U) {
  const Grid3& g = *U.grid;
  SpectralField V(U.grid);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                          g.ky2()[m] * g.ky2()[m];
        const std::size_t idx = g.cidx(i, j, m);
        V.c[idx] = U.c[idx] / (1.0 + k2);
      }
  return V;
}

// Circular roll putting the peak at the origin indices (n/2 per axis).
RealField recenter_to_peak(const RealField& u) {
  const Grid3& g = *u.grid;
  std::size_t best = 0;
  for (std::size_t q = 1; q < u.v.size(); ++q)
    if (u.v[q] > u.v[best]) best = q;
  const int bk = static_cast<int>(best % g.ny2());
  const int bj = static_cast<int>((best / g.ny2()) % g.ny1());
  const int bi = static_cast<int>(best / (static_cast<std::size_t>(g.ny1()) * g.ny2()));
  const int si = (g.nx() / 2 - bi + g.nx()) % g.nx();
  const int sj = (g.ny1() / 2 - bj + g.ny1()) % g.ny1();
  const int sk = (g.ny2() / 2 - bk + g.ny2()) % g.ny2();
  if (si == 0 && sj == 0 && sk == 0) return u;
  RealField r(u.grid);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int k = 0; k < g.ny2(); ++k)
        r.at((i + si) % g.nx(), (j + sj) % g.ny1(), (k + sk) % g.ny2()) =
            u.at(i, j, k);
  return r;
}

double equation_residual(const SpectralField& Phi, const SpectralField& Pow) {
  const Grid3& g = *Phi.grid;
  SpectralField R(Phi.grid);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int m = 0; m < g.ny2_modes(); ++m) {
        const double k2 = g.kx()[i] * g.kx()[i] + g.ky1()[j] * g.ky1()[j] +
                          g.ky2()[m] * g.ky2()[m];
        const std::size_t idx = g.cidx(i, j, m);
        R.c[idx] = -(k2 + 1.0) * Phi.c[idx] + Pow.c[idx];
      }
  return l2_norm(R) / l2_norm(Phi);
}

}  // namespace

GroundState petviashvili_solve(GridPtr grid,
                               const PetviashviliParams& params) {
  if (!(params.amplitude_seed > 0.0))
    throw std::invalid_argument("petviashvili: amplitude_seed must be > 0");
  if (!(params.gamma > 1.0 && params.gamma < 2.0))
    throw std::invalid_argument("petviashvili: gamma must lie in (1,2)");
  if (!(params.tol > 0.0))
    throw std::invalid_argument("petviashvili: tol must be positive");

  const Grid3& g = *grid;
  RealField phi(grid);
  const double iw2 = 1.0 / (2.0 * params.seed_width * params.seed_width);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny1(); ++j)
      for (int k = 0; k < g.ny2(); ++k) {
        const double r2 = g.x(i) * g.x(i) + g.y1(j) * g.y1(j) +
                          g.y2(k) * g.y2(k);
        phi.at(i, j, k) = params.amplitude_seed * std::exp(-r2 * iw2);
      }
  const double seed_peak = params.amplitude_seed;

  GroundState gs;
  gs.grid = grid;
  double residual = 1.0;
  double change = 1.0;
  SpectralField Phi = forward_transform(phi);

  int it = 0;
  for (; it < params.max_iter; ++it) {
    const SpectralField Pow = power_73_hat(Phi, params.pad);
    residual = equation_residual(Phi, Pow);
    gs.residual_history.push_back(residual);
    if (change < params.tol && residual < 10.0 * params.tol) break;

    const double num = h1_pairing(Phi);
    // <phi^{7/3}, phi> evaluated in k-space (Parseval).
    const Grid3& gg = *grid;
    const int ny2m = gg.ny2_modes();
    const double den =
        (1.0 / gg.box_volume()) *
        pairwise_reduce(0, Phi.c.size(), [&](std::size_t idx) {
          const int m = static_cast<int>(idx % ny2m);
          return gg.hermitian_weight(m) *
                 (Pow.c[idx] * std::conj(Phi.c[idx])).real();
        });
    if (!std::isfinite(den) || den <= 0.0)
      throw std::runtime_error(
          "petviashvili: stabilizing ratio degenerate, seed too small");
    const double s = num / den;
    gs.s_history.push_back(s);
    const double sg = std::pow(s, params.gamma);

    SpectralField Next = helmholtz_inverse(Pow);
    for (auto& c : Next.c) c *= sg;

    // Relative L2 change of the iterate.
    SpectralField Diff = Next - Phi;
    change = l2_norm(Diff) / l2_norm(Phi);
    Phi = std::move(Next);

    const RealField phys = inverse_transform(Phi);
    if (max_abs(phys) < 1e-8 * seed_peak)
      throw std::runtime_error("petviashvili: iterate collapsed, seed too small");
  }

  if (!(change < params.tol && residual < 10.0 * params.tol)) {
    std::ostringstream msg;
    msg << "petviashvili: no convergence after " << params.max_iter
        << " iterations; last residuals:";
    const std::size_t n = gs.residual_history.size();
    for (std::size_t q = n > 5 ? n - 5 : 0; q < n; ++q)
      msg << " " << gs.residual_history[q];
    throw std::runtime_error(msg.str());
  }

  gs.phi = recenter_to_peak(inverse_transform(Phi));
  gs.iterations = it;
  gs.converged = true;

  const SpectralField PhiC = forward_transform(gs.phi);
  gs.l2_norm = l2_norm(gs.phi);
  gs.grad_l2_norm = std::sqrt(grad_l2_sq(PhiC));
  gs.p_norm_10_3 = std::pow(p103_integral(gs.phi), 0.3);
  gs.c_opt = std::pow(5.0 / 3.0, 0.3) / std::pow(gs.l2_norm, 0.4);
  const auto [r1, r2] = pohozaev_residuals(gs);
  gs.pohozaev_residual_1 = r1;
  gs.pohozaev_residual_2 = r2;

  // Decay flag: peak vs the value at half the box radius along x.
  const double peak = max_abs(gs.phi);
  const int ih = g.nx() / 2 + g.nx() / 4;
  const double at_half = std::abs(gs.phi.at(ih, g.ny1() / 2, g.ny2() / 2));
  gs.decay_resolved = at_half < 1e-6 * peak;
  return gs;
}

GroundState petviashvili_solve(GridPtr grid, double amplitude_seed,
                               double gamma, double tol, int max_iter) {
  PetviashviliParams p;
  p.amplitude_seed = amplitude_seed;
  p.gamma = gamma;
  p.tol = tol;
  p.max_iter = max_iter;
  return petviashvili_solve(std::move(grid), p);
}

std::pair<double, double> pohozaev_residuals(const GroundState& gs) {
  const SpectralField Phi = forward_transform(gs.phi);
  const double a = grad_l2_sq(Phi);
  const double b = l2_norm_sq(gs.phi);
  const double p = p103_integral(gs.phi);
  const double r1 = std::abs(a + b - p) / b;
  const double r2 = std::abs(0.5 * a + 1.5 * b - 0.9 * p) / b;
  return {r1, r2};
}

GnConstant gn_constant(const GroundState& gs) {
  if (!gs.converged)
    throw std::invalid_argument("gn_constant: ground state not converged");
  GnConstant out;
  out.c_opt = std::pow(5.0 / 3.0, 0.3) / std::pow(gs.l2_norm, 0.4);
  out.mass_threshold = gs.l2_norm;
  const double check =
      std::pow(5.0 / 3.0, 0.75) * std::pow(out.c_opt, -2.5);
  if (std::abs(check - out.mass_threshold) >
      1e-10 * (1.0 + out.mass_threshold))
    throw std::logic_error("gn_constant: smallness forms disagree");
  return out;
}

double gn_ratio(const RealField& w) {
  const double num = std::pow(p103_integral(w), 0.3);
  const SpectralField W = forward_transform(w);
  const double den =
      std::pow(std::sqrt(grad_l2_sq(W)), 0.6) * std::pow(l2_norm(w), 0.4);
  return num / den;
}

RadialProfile::RadialProfile(const RealField& centered) {
  const Grid3& g = *centered.grid;
  const int n = g.nx();
  const double l = g.lx();
  dr_ = g.hx() / 8.0;
  const double l_min = std::min({g.lx(), g.ly1(), g.ly2()});
  r_max_ = 2.0 * std::sqrt(g.lx() * g.lx() + g.ly1() * g.ly1() +
                           g.ly2() * g.ly2());

  // 1D Fourier coefficients of the axis restriction; the restriction of a
  // band-limited 3D field to a grid line is a trig polynomial in x, so this
  // interpolation is exact at every radius up to the half-period.
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i)
    axis[i] = centered.at(i, g.ny1() / 2, g.ny2() / 2);
  const int half = n / 2;
  std::vector<std::complex<double>> coef(half + 1);
  for (int m = 0; m <= half; ++m) {
    std::complex<double> a = 0.0;
    const double km = std::numbers::pi * m / l;
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i);
      a += axis[i] * std::complex<double>(std::cos(km * x), -std::sin(km * x));
    }
    coef[m] = a / static_cast<double>(n);
  }
  auto trig_eval = [&](double r) {
    double val = coef[0].real();
    for (int m = 1; m < half; ++m) {
      const double km = std::numbers::pi * m / l;
      val += 2.0 * (coef[m].real() * std::cos(km * r) -
                    coef[m].imag() * std::sin(km * r));
    }
    val += coef[half].real() * std::cos(std::numbers::pi * half / l * r);
    return val;
  };

  // Find where the stored profile stops being a clean monotone decay: the
  // first sign flip past the core marks the band-limitation ringing floor.
  double r_clean = 0.95 * l_min;
  for (double r = 0.3 * l_min; r <= 0.95 * l_min; r += dr_ * 4) {
    if (trig_eval(r) <= 0.0) {
      r_clean = 0.9 * r;
      break;
    }
  }
  joint_ = r_clean;

  // Far-field model log(r phi) = a - mu r + b / r, the Yukawa decay with
  // its leading correction. The axis data is periodized, so fitting free
  // decay needs the image at 2L - r peeled off; the peel uses the model
  // itself, iterated from a conservative first window until it settles.
  double ca = 0.0, cmu = 1.0, cb = 0.0;
  bool have_tail = false;
  {
    std::vector<double> rs, vs;
    for (double r = 0.55 * l_min; r <= joint_; r += dr_ * 4) {
      const double v = trig_eval(r);
      if (v <= 0.0) continue;
      rs.push_back(r);
      vs.push_back(v);
    }
    auto det3 = [](const double a[3][3]) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    double sol[3] = {0.0, 0.0, 0.0};
    auto model = [&](double r) {
      return std::exp(sol[0] - sol[1] * r + sol[2] / r) / r;
    };
    auto fit_pass = [&](double r_hi, bool peel) {
      double m[3][3] = {{0}};
      double rhs[3] = {0};
      int used = 0;
      for (std::size_t q = 0; q < rs.size(); ++q) {
        if (rs[q] > r_hi) continue;
        double v = vs[q];
        if (peel) v -= model(2.0 * l - rs[q]);
        if (v <= 0.0) continue;
        ++used;
        const double y = std::log(v * rs[q]);
        const double base[3] = {1.0, -rs[q], 1.0 / rs[q]};
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) m[a][b] += base[a] * base[b];
          rhs[a] += base[a] * y;
        }
      }
      const double d0 = det3(m);
      if (used < 6 || std::abs(d0) < 1e-12) return false;
      double tmp[3][3];
      double out[3];
      for (int col = 0; col < 3; ++col) {
        std::copy(&m[0][0], &m[0][0] + 9, &tmp[0][0]);
        for (int row = 0; row < 3; ++row) tmp[row][col] = rhs[row];
        out[col] = det3(tmp) / d0;
      }
      if (!(out[1] > 0.1)) return false;
      std::copy(out, out + 3, sol);
      return true;
    };
    // Conservative first window, then the full clean window with the
    // image peeled through the current model.
    have_tail = fit_pass(0.75 * l_min, false);
    for (int pass = 0; pass < 3 && have_tail; ++pass)
      have_tail = fit_pass(joint_, true);
    ca = sol[0];
    cmu = sol[1];
    cb = sol[2];
  }
  auto tail = [&](double r) {
    return have_tail ? std::exp(ca - cmu * r + cb / r) / r : 0.0;
  };

  // The axis restriction is the periodized profile; peel off the image at
  // 2L - r so the table holds the free-space decay, which the caller
  // re-periodizes explicitly.
  const std::size_t count = static_cast<std::size_t>(r_max_ / dr_) + 8;
  table_.resize(count);
  for (std::size_t q = 0; q < count; ++q) {
    const double r = q * dr_;
    if (r <= joint_)
      table_[q] = trig_eval(r) - tail(2.0 * l - r);
    else
      table_[q] = tail(r);
  }
}

double RadialProfile::operator()(double r) const {
  r = std::abs(r);
  const double q = r / dr_;
  const auto n = static_cast<std::ptrdiff_t>(table_.size());
  std::ptrdiff_t base = static_cast<std::ptrdiff_t>(std::floor(q)) - 2;
  base = std::clamp<std::ptrdiff_t>(base, 0, n - 6);
  if (q >= static_cast<double>(n - 1)) return 0.0;
  // 6-point Lagrange interpolation on the uniform table.
  const double t = q - base;
  double val = 0.0;
  for (int a = 0; a < 6; ++a) {
    double w = 1.0;
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      w *= (t - b) / (a - b);
    }
    val += w * table_[base + a];
  }
  return val;
}

RealField soliton_field(const GroundState& gs, double c, double t,
                        double center_x) {
  if (!(c > 0.0))
    throw std::invalid_argument("soliton_field: speed must be positive");
  const RadialProfile profile(gs.phi);
  const Grid3& g = *gs.grid;
  RealField u(gs.grid);
  const double sc = std::sqrt(c);
  const double amp = std::pow(c, 0.75);
  const double shift = center_x + c * t;
  const double px = 2.0 * g.lx();
  const double py1 = 2.0 * g.ly1();
  const double py2 = 2.0 * g.ly2();
  // Periodize over the nearest images so the field matches the box
  // geometry the ground state itself lives in.
  for (int i = 0; i < g.nx(); ++i) {
    double dx0 = g.x(i) - shift;
    dx0 -= px * std::round(dx0 / px);
    for (int j = 0; j < g.ny1(); ++j) {
      const double y1 = g.y1(j);
      for (int k = 0; k < g.ny2(); ++k) {
        const double y2 = g.y2(k);
        double val = 0.0;
        for (int mx = -1; mx <= 1; ++mx) {
          const double dx = dx0 + mx * px;
          for (int my1 = -1; my1 <= 1; ++my1) {
            const double e1 = y1 + my1 * py1;
            for (int my2 = -1; my2 <= 1; ++my2) {
              const double e2 = y2 + my2 * py2;
              const double rho = std::sqrt(dx * dx + e1 * e1 + e2 * e2);
              val += profile(sc * rho);
            }
          }
        }
        u.at(i, j, k) = amp * val;
      }
    }
  }
  return u;
}

bool soliton_resolved(const Grid3& g, double c, double frac) {
  const double h = std::max({g.hx(), g.hy1(), g.hy2()});
  return std::sqrt(c) * h <= frac;
}

std::vector<double> shooting_radial_profile(double r_max, double dr) {
  const double r_stop = std::max(r_max, 25.0);
  auto rhs = [](double r, double f, double fp, double& df, double& dfp) {
    df = fp;
    dfp = f - real_power(f, kP73) - 2.0 * fp / r;
  };
  // +1: amplitude too small, the profile turns back upward.
  // -1: amplitude too large, the profile crosses zero.
  //  0: undecided within r_stop (amplitude is critical to within roundoff).
  auto integrate = [&](double a, std::vector<double>* out) {
    const double b = (a - real_power(a, kP73)) / 6.0;
    double r = dr;
    double f = a + b * r * r;
    double fp = 2.0 * b * r;
    if (out) {
      out->push_back(a);
      out->push_back(f);
    }
    while (r < r_stop) {
      double k1f, k1p, k2f, k2p, k3f, k3p, k4f, k4p;
      rhs(r, f, fp, k1f, k1p);
      rhs(r + 0.5 * dr, f + 0.5 * dr * k1f, fp + 0.5 * dr * k1p, k2f, k2p);
      rhs(r + 0.5 * dr, f + 0.5 * dr * k2f, fp + 0.5 * dr * k2p, k3f, k3p);
      rhs(r + dr, f + dr * k3f, fp + dr * k3p, k4f, k4p);
      f += dr / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f);
      fp += dr / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      r += dr;
      if (out) out->push_back(f);
      if (f < 0.0) return -1;
      if (fp > 0.0 && r > 4 * dr) return +1;
    }
    return 0;
  };

  // Bracket the critical amplitude, then bisect to roundoff.
  double lo = 1.5, hi = 1.5;
  while (integrate(hi, nullptr) != -1) {
    hi *= 1.5;
    if (hi > 1e3) throw std::runtime_error("shooting: cannot bracket above");
  }
  while (integrate(lo, nullptr) != +1) {
    lo *= 0.8;
    if (lo < 1e-2) throw std::runtime_error("shooting: cannot bracket below");
  }
  for (int q = 0; q < 200; ++q) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const int cls = integrate(mid, nullptr);
    if (cls == -1)
      hi = mid;
    else if (cls == +1)
      lo = mid;
    else
      break;
  }

  std::vector<double> profile;
  integrate(0.5 * (lo + hi), &profile);

  // Past the radius where the unstable mode takes over, continue the decay
  // exponentially instead of keeping the contaminated values.
  std::size_t trust = profile.size();
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    const double r = i * dr;
    if (r > 2.0 && (profile[i] <= 0.0 || profile[i + 1] > profile[i])) {
      trust = i;
      break;
    }
  }
  const std::size_t want = static_cast<std::size_t>(r_max / dr) + 1;
  profile.resize(std::min(trust, profile.size()));
  while (profile.size() < want) {
    const double r = profile.size() * dr;
    const double prev = profile.back();
    profile.push_back(std::max(0.0, prev * std::exp(-dr) * (r - dr) / r));
  }
  profile.resize(want);
  return profile;
}

}  // namespace zk
