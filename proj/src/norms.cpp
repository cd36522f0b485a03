#include "zk/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zk/reduce.hpp"
#include "zk/spectral.hpp"

namespace zk {

double p103_integral(const SpectralField& U) {
  GridPtr fine = padded_grid(*U.grid, 2.0);
  const RealField up = inverse_transform(pad_embed(U, fine));
  return fine->cell_volume() *
         pairwise_reduce(0, up.v.size(), [&](std::size_t i) {
           return std::pow(std::abs(up.v[i]), 10.0 / 3.0);
         });
}

double p103_integral(const RealField& u) {
  return p103_integral(forward_transform(u));
}

InvariantTriple invariants(const RealField& u) {
  InvariantTriple out;
  out.mass = l2_norm_sq(u);
  out.mean = integral(u);
  const SpectralField U = forward_transform(u);
  double grad_sq = 0.0;
  for (Axis ax : {Axis::x, Axis::y1, Axis::y2})
    grad_sq += l2_norm_sq(spectral_derivative(U, ax, 1));
  out.energy = grad_sq - 0.6 * p103_integral(U);
  return out;
}

Trajectory single_time_trajectory(const RealField& u, double t) {
  Trajectory traj;
  traj.grid = u.grid;
  traj.times = {t};
  traj.fields = {u};
  DiagnosticsRow row;
  row.t = t;
  const InvariantTriple inv = invariants(u);
  row.mass = inv.mass;
  row.energy = inv.energy;
  row.mean = inv.mean;
  traj.diagnostics = {row};
  return traj;
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

XstBlockData::XstBlockData(const Trajectory& traj) {
  if (traj.times.empty() || traj.fields.empty())
    throw std::invalid_argument("xst_norms: empty trajectory");
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    if (!(traj.times[i] > traj.times[i - 1]))
      throw std::invalid_argument("xst_norms: times must increase");

  const Grid3& g = *traj.grid;
  DyadicDecomposition dec(traj.grid);
  j_max_ = dec.j_max();
  const int nb = j_max_ + 1;
  const int nx = g.nx();
  const std::size_t per_x =
      static_cast<std::size_t>(g.ny1()) * g.ny2();

  sobolev_.assign(nb, 0.0);
  smooth_.assign(nb, 0.0);
  maximal_.assign(nb, 0.0);
  strichartz_.assign(nb, 0.0);

  const std::vector<double> wt = trapezoid_weights(traj.times);
  const double hyy = g.hy1() * g.hy2();
  const double cell = g.cell_volume();

  // Running accumulators per block: the y,T integral per x line, the
  // sup over (y, T) per x line, and the space-time L^4 sum.
  std::vector<std::vector<double>> yT_sq(nb, std::vector<double>(nx, 0.0));
  std::vector<std::vector<double>> yT_sup(nb, std::vector<double>(nx, 0.0));
  std::vector<double> l4(nb, 0.0);

  for (std::size_t ti = 0; ti < traj.times.size(); ++ti) {
    const SpectralField U = forward_transform(traj.fields[ti]);
    const std::vector<double> bl = dec.block_l2(U);
    for (int b = 0; b < nb; ++b)
      sobolev_[b] = std::max(sobolev_[b], bl[b]);

    for (int b = 0; b < nb; ++b) {
      const RealField ub = inverse_transform(dec.project(U, b));
      for (int ix = 0; ix < nx; ++ix) {
        const double* line = ub.v.data() + static_cast<std::size_t>(ix) * per_x;
        const double ssq = pairwise_reduce(
            0, per_x, [&](std::size_t q) { return line[q] * line[q]; });
        yT_sq[b][ix] += wt[ti] * hyy * ssq;
        double mx = yT_sup[b][ix];
        for (std::size_t q = 0; q < per_x; ++q)
          mx = std::max(mx, std::abs(line[q]));
        yT_sup[b][ix] = mx;
      }
      l4[b] += wt[ti] * cell *
               pairwise_reduce(0, ub.v.size(), [&](std::size_t q) {
                 const double v2 = ub.v[q] * ub.v[q];
                 return v2 * v2;
               });
    }
  }

  const double hx = g.hx();
  for (int b = 0; b < nb; ++b) {
    smooth_[b] = std::sqrt(*std::max_element(yT_sq[b].begin(), yT_sq[b].end()));
    maximal_[b] =
        std::sqrt(hx * pairwise_reduce(0, static_cast<std::size_t>(nx),
                                       [&](std::size_t ix) {
                                         const double m = yT_sup[b][ix];
                                         return m * m;
                                       }));
    strichartz_[b] = std::pow(l4[b], 0.25);
  }
}

XstReport XstBlockData::assemble(double s, double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("xst_norms: eps must be > 0");
  XstReport r;
  r.s = s;
  r.epsilon_max = eps;
  auto weighted = [&](const std::vector<double>& comp, double expo) {
    double sum = 0.0;
    for (int j = 1; j <= j_max_; ++j)
      sum += std::exp2(2.0 * expo * j) * comp[j] * comp[j];
    return comp[0] + std::sqrt(sum);
  };
  r.sobolev = weighted(sobolev_, s);
  r.smooth = weighted(smooth_, s + 1.0);
  r.maximal = weighted(maximal_, s - 1.0 - eps);
  r.strichartz = weighted(strichartz_, s);
  r.total = r.sobolev + r.smooth + r.maximal + r.strichartz;
  return r;
}

XstReport assemble_xst(const XstBlockData& data, double s, double eps) {
  return data.assemble(s, eps);
}

XstReport xst_norms(const Trajectory& traj, double s, double eps) {
  return XstBlockData(traj).assemble(s, eps);
}

double xtilde_norm(const XstBlockData& data, double s, int n_quad,
                   double eps) {
  const double lo = 5.0 / 6.0;
  if (!(s > lo))
    throw std::invalid_argument("xtilde_norm: need s > 5/6");
  if (n_quad < 3)
    throw std::invalid_argument("xtilde_norm: need n_quad >= 3");
  const double h = (s - lo) / (n_quad - 1);
  double acc = 0.0;
  for (int q = 0; q < n_quad; ++q) {
    const double r = lo + q * h;
    const double total = data.assemble(r, eps).total;
    const double w = (q == 0 || q == n_quad - 1) ? 0.5 : 1.0;
    acc += w * total * total;
  }
  return acc * h;
}

double xtilde_norm(const Trajectory& traj, double s, int n_quad) {
  return xtilde_norm(XstBlockData(traj), s, n_quad);
}

}  // namespace zk
