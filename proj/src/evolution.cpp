#include "zk/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "zk/propagator.hpp"
#include "zk/spectral.hpp"

namespace zk {

namespace {

// exp(dt * L) with L the dispersive symbol plus, for the parabolic variant,
// the -eta |k|^4 dissipation.
SpectralField apply_linear(const SpectralField& U, double dt,
                           const EvolutionConfig& cfg) {
  SpectralField V = apply_group(U, dt);
  if (cfg.variant == Variant::parabolic)
    V = apply_parabolic(V, dt, cfg.eta);
  return V;
}

SpectralField nonlinear_rhs(const SpectralField& U,
                            const EvolutionConfig& cfg) {
  // du/dt = -dx Delta u - dx(power); the linear half lives in the
  // integrating factor, so the vector field is minus the flux.
  SpectralField F = (cfg.variant == Variant::exact)
                        ? flux_hat(U, cfg.pad)
                        : mollified_flux_hat(
                              U, {cfg.epsilon, cfg.mollifier_kind}, cfg.pad);
  for (auto& c : F.c) c = -c;
  return F;
}

void axpy(SpectralField& y, double a, const SpectralField& x) {
  for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}

}  // namespace

SpectralField step_ifrk4_hat(const SpectralField& U, double dt,
                             const EvolutionConfig& cfg) {
  if (cfg.variant == Variant::parabolic && dt < 0.0)
    throw std::invalid_argument("step_ifrk4: parabolic variant needs dt > 0");
  if (cfg.linear_only) return apply_linear(U, dt, cfg);

  const double h = dt;
  const SpectralField k1 = nonlinear_rhs(U, cfg);

  SpectralField u2 = U;
  axpy(u2, 0.5 * h, k1);
  u2 = apply_linear(u2, 0.5 * h, cfg);
  const SpectralField k2 = nonlinear_rhs(u2, cfg);

  SpectralField half_u = apply_linear(U, 0.5 * h, cfg);
  SpectralField u3 = half_u;
  axpy(u3, 0.5 * h, k2);
  const SpectralField k3 = nonlinear_rhs(u3, cfg);

  SpectralField u4 = half_u;
  axpy(u4, h, k3);
  u4 = apply_linear(u4, 0.5 * h, cfg);
  const SpectralField k4 = nonlinear_rhs(u4, cfg);

  // u_{n+1} = E(h) u + h/6 [E(h) k1 + 2 E(h/2) (k2 + k3) + k4]
  SpectralField mid = k2 + k3;
  SpectralField out = U;
  axpy(out, h / 6.0, k1);
  out = apply_linear(out, 0.5 * h, cfg);
  axpy(out, h / 3.0, mid);
  out = apply_linear(out, 0.5 * h, cfg);
  axpy(out, h / 6.0, k4);
  return out;
}

RealField step_ifrk4(const RealField& u, double dt,
                     const EvolutionConfig& cfg) {
  RealField out =
      inverse_transform(step_ifrk4_hat(forward_transform(u), dt, cfg));
  const double m = max_abs(out);
  if (!(m < cfg.blowup_threshold) || !std::isfinite(m))
    throw BlowupSignal({dt, m});
  return out;
}

namespace {

DiagnosticsRow diagnostics_at(const RealField& u, double t,
                              const std::vector<double>& s_values) {
  DiagnosticsRow row;
  row.t = t;
  const InvariantTriple inv = invariants(u);
  row.mass = inv.mass;
  row.energy = inv.energy;
  row.mean = inv.mean;
  const SpectralField U = forward_transform(u);
  row.tail_ratio = spectral_tail_ratio(U);
  for (double s : s_values) row.hs[s] = hs_norm_direct(U, s);
  return row;
}

}  // namespace

EvolveResult evolve(const RealField& u0, const EvolutionConfig& cfg) {
  cfg.validate();
  EvolveResult res;
  Trajectory& traj = res.trajectory;
  traj.grid = u0.grid;

  const int n_steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  if (!(n_steps >= 1) || std::abs(n_steps * cfg.dt - cfg.T) > 1e-9 * cfg.T)
    throw std::invalid_argument("evolve: T must be an integer multiple of dt");

  auto record = [&](const RealField& u, double t) {
    traj.times.push_back(t);
    if (cfg.store_fields) traj.fields.push_back(u);
    traj.diagnostics.push_back(diagnostics_at(u, t, cfg.stored_s_values));
  };

  // The canonical state between steps is the physical field, so a stored
  // snapshot captures the evolution state exactly and resume is bit-stable.
  RealField u = u0;
  record(u, 0.0);
  for (int step = 1; step <= n_steps; ++step) {
    const double t = step * cfg.dt;
    try {
      u = step_ifrk4(u, cfg.dt, cfg);
    } catch (const BlowupSignal& sig) {
      res.blowup = BlowupEvent{t, sig.event.max_abs};
      return res;
    }
    if (step % cfg.diag_every == 0 || step == n_steps) {
      record(u, t);
      const double h1 = hs_norm_direct(forward_transform(u), 1.0);
      if (!(h1 < cfg.blowup_threshold)) {
        res.blowup = BlowupEvent{t, max_abs(u)};
        return res;
      }
    }
  }
  return res;
}

PicardResult picard_solve(const RealField& u0, double T, int n_nodes,
                          int max_iter, double tol,
                          const EvolutionConfig& cfg) {
  if (n_nodes < 8)
    throw std::invalid_argument("picard_solve: need n_nodes >= 8");
  PicardResult res;
  PicardReport& rep = res.report;

  std::vector<double> times(n_nodes);
  for (int j = 0; j < n_nodes; ++j) times[j] = T * j / (n_nodes - 1);

  const SpectralField U0 = forward_transform(u0);
  std::vector<SpectralField> free_part(n_nodes);
  for (int j = 0; j < n_nodes; ++j) free_part[j] = apply_group(U0, times[j]);

  std::vector<SpectralField> w = free_part;
  auto iterate = [&](const std::vector<SpectralField>& cur) {
    std::vector<SpectralField> fl(n_nodes);
    for (int j = 0; j < n_nodes; ++j)
      fl[j] = cfg.linear_only
                  ? SpectralField(u0.grid)
                  : (cfg.variant == Variant::exact
                         ? flux_hat(cur[j], cfg.pad)
                         : mollified_flux_hat(
                               cur[j], {cfg.epsilon, cfg.mollifier_kind},
                               cfg.pad));
    std::vector<SpectralField> next(n_nodes);
    next[0] = free_part[0];
    for (int j = 1; j < n_nodes; ++j) {
      SpectralField integral = duhamel_integral(
          std::span(times).first(j + 1), std::span(fl).first(j + 1), times[j],
          QuadRule::trapezoid);
      next[j] = free_part[j] - integral;
    }
    return next;
  };

  int grow_streak = 0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<SpectralField> next = iterate(w);
    double dist = 0.0;
    for (int j = 0; j < n_nodes; ++j)
      dist = std::max(dist, l2_norm(next[j] - w[j]));
    rep.iterate_distances.push_back(dist);
    w = std::move(next);

    const std::size_t m = rep.iterate_distances.size();
    if (m >= 2 && rep.iterate_distances[m - 1] > rep.iterate_distances[m - 2])
      ++grow_streak;
    else
      grow_streak = 0;
    if (grow_streak >= 3) {
      rep.converged = false;
      rep.contraction_ratio = rep.iterate_distances.back() /
                              rep.iterate_distances[m - 2];
      return res;  // non-contraction, no trajectory
    }
    if (dist < tol) {
      rep.converged = true;
      break;
    }
  }

  // Geometric-mean contraction ratio over the recorded distances.
  const auto& d = rep.iterate_distances;
  if (d.size() >= 2 && d.front() > 0.0 && d.back() > 0.0)
    rep.contraction_ratio =
        std::pow(d.back() / d.front(), 1.0 / (d.size() - 1));

  if (!rep.converged) return res;

  // Residual of the discretized Duhamel equation at the fixed point.
  std::vector<SpectralField> check = iterate(w);
  for (int j = 0; j < n_nodes; ++j)
    rep.duhamel_residual =
        std::max(rep.duhamel_residual, l2_norm(check[j] - w[j]));

  Trajectory traj;
  traj.grid = u0.grid;
  traj.times = times;
  for (int j = 0; j < n_nodes; ++j) {
    RealField uj = inverse_transform(w[j]);
    traj.diagnostics.push_back(diagnostics_at(uj, times[j], cfg.stored_s_values));
    traj.fields.push_back(std::move(uj));
  }
  res.trajectory = std::move(traj);
  return res;
}

std::vector<GronwallRow> gronwall_monitor(const Trajectory& traj, double n,
                                          double c) {
  if (traj.diagnostics.empty())
    throw std::invalid_argument("gronwall_monitor: empty trajectory");
  for (const auto& row : traj.diagnostics)
    if (!row.hs.count(n) || !row.hs.count(1.0))
      throw std::invalid_argument(
          "gronwall_monitor: trajectory lacks H^N or H^1 diagnostics");

  std::vector<GronwallRow> out;
  const double lhs0 = traj.diagnostics.front().hs.at(n);
  double integral = 0.0;
  for (std::size_t i = 0; i < traj.diagnostics.size(); ++i) {
    if (i > 0) {
      const double h = traj.times[i] - traj.times[i - 1];
      const double fa =
          std::pow(traj.diagnostics[i - 1].hs.at(1.0), 4.0 / 3.0);
      const double fb = std::pow(traj.diagnostics[i].hs.at(1.0), 4.0 / 3.0);
      integral += 0.5 * h * (fa + fb);
    }
    out.push_back({traj.times[i], traj.diagnostics[i].hs.at(n),
                   lhs0 * std::exp(c * integral)});
  }
  return out;
}

double fit_gronwall_constant(const Trajectory& traj, double n) {
  const auto rows = gronwall_monitor(traj, n, 0.0);
  const double lhs0 = rows.front().lhs;
  // Redo the running integral, then pick the smallest C with
  // lhs <= lhs0 exp(C I) over the first tenth of the times.
  double integral = 0.0;
  double c = 0.0;
  const std::size_t upto =
      std::max<std::size_t>(2, traj.times.size() / 10 + 1);
  for (std::size_t i = 1; i < std::min(upto, traj.times.size()); ++i) {
    const double h = traj.times[i] - traj.times[i - 1];
    const double fa = std::pow(traj.diagnostics[i - 1].hs.at(1.0), 4.0 / 3.0);
    const double fb = std::pow(traj.diagnostics[i].hs.at(1.0), 4.0 / 3.0);
    integral += 0.5 * h * (fa + fb);
    const double lhs = traj.diagnostics[i].hs.at(n);
    if (lhs > lhs0 && integral > 0.0)
      c = std::max(c, std::log(lhs / lhs0) / integral);
  }
  return c;
}

}  // namespace zk
