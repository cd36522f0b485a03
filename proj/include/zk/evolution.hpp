#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "zk/field.hpp"
#include "zk/nonlinearity.hpp"
#include "zk/norms.hpp"

namespace zk {

enum class Variant { exact, mollified, parabolic };

struct EvolutionConfig {
  Variant variant = Variant::exact;
  double epsilon = 0.25;  // mollified / parabolic variants
  MollifierSpec::Kind mollifier_kind = MollifierSpec::Kind::sharp_cutoff;
  double eta = 1e-3;  // parabolic dissipation strength
  double dt = 1e-3;
  double T = 1.0;
  double pad = 1.5;
  int diag_every = 10;
  double blowup_threshold = 1e6;  // max-abs and H^1 cap
  std::vector<double> stored_s_values;
  bool linear_only = false;  // drop the flux, keep the free group
  bool store_fields = true;

  void validate() const {
    if (!(dt != 0.0)) throw std::invalid_argument("evolution: dt must be nonzero");
    if (!(T > 0.0)) throw std::invalid_argument("evolution: T must be positive");
    if (std::abs(dt) > T) throw std::invalid_argument("evolution: need dt <= T");
    if (!(blowup_threshold > 0.0))
      throw std::invalid_argument("evolution: blowup threshold must be > 0");
  }
};

struct BlowupEvent {
  double time;
  double max_abs;
};

// Raised by the stepper when the state exceeds the blow-up threshold;
// evolve() converts it into a partial trajectory plus the event.
struct BlowupSignal : std::runtime_error {
  BlowupEvent event;
  explicit BlowupSignal(BlowupEvent e)
      : std::runtime_error("blow-up detected"), event(e) {}
};

// One integrating-factor RK4 step: the free group (and the parabolic
// multiplier, for that variant) is applied exactly, the flux is the RK
// vector field. With the flux disabled the step is the exact group action.
RealField step_ifrk4(const RealField& u, double dt, const EvolutionConfig& cfg);
SpectralField step_ifrk4_hat(const SpectralField& U, double dt,
                             const EvolutionConfig& cfg);

struct EvolveResult {
  Trajectory trajectory;
  std::optional<BlowupEvent> blowup;
};

EvolveResult evolve(const RealField& u0, const EvolutionConfig& cfg);

struct PicardReport {
  std::vector<double> iterate_distances;
  double contraction_ratio = 0.0;  // geometric mean of successive ratios
  bool converged = false;
  double duhamel_residual = 0.0;
};

struct PicardResult {
  std::optional<Trajectory> trajectory;
  PicardReport report;
};

// Fixed-point iteration of the Duhamel map on n_nodes equispaced time nodes,
// w <- U(t) u0 - int_0^t U(t-t') flux(w)(t') dt', trapezoid quadrature.
// Stops when the sup-in-time L2 distance of successive iterates drops below
// tol; reports non-contraction when the distance grows three times in a row.
PicardResult picard_solve(const RealField& u0, double T, int n_nodes,
                          int max_iter, double tol,
                          const EvolutionConfig& cfg);

struct GronwallRow {
  double t;
  double lhs;       // ||w(t)||_{H^N}
  double envelope;  // ||u0||_{H^N} exp(C int_0^t ||w||_{H^1}^{4/3})
};

std::vector<GronwallRow> gronwall_monitor(const Trajectory& traj, double n,
                                          double c);
// Smallest C making the envelope hold over the first tenth of the stored
// times.
double fit_gronwall_constant(const Trajectory& traj, double n);

}  // namespace zk
