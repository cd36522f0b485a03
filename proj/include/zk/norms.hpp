#pragma once

#include <map>
#include <optional>
#include <vector>

#include "zk/field.hpp"
#include "zk/lp.hpp"

namespace zk {

struct InvariantTriple {
  double mass;    // ||u||_2^2
  double energy;  // ||grad u||_2^2 - (3/5) int |u|^{10/3}
  double mean;    // int u
};

// mass, energy and mean of a field; gradient taken spectrally, the 10/3
// power through |u|^{10/3}.
InvariantTriple invariants(const RealField& u);

// Quadrature of int |u|^{10/3} on a twice-oversampled grid; the kink of the
// fractional power at zero crossings makes the plain grid sum noticeably
// aliased.
double p103_integral(const RealField& u);
double p103_integral(const SpectralField& U);

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double mean = 0.0;
  double tail_ratio = 0.0;
  std::map<double, double> hs;  // H^s norms at configured s values
};

// Time-stamped sequence of fields plus per-step diagnostics.
struct Trajectory {
  GridPtr grid;
  std::vector<double> times;
  std::vector<RealField> fields;
  std::vector<DiagnosticsRow> diagnostics;
};

Trajectory single_time_trajectory(const RealField& u, double t = 0.0);

struct XstReport {
  double s = 0.0;
  double epsilon_max = 0.0;
  double sobolev = 0.0;
  double smooth = 0.0;
  double maximal = 0.0;
  double strichartz = 0.0;
  double total = 0.0;
};

// Per-block mixed-norm data of a trajectory. The block norms do not depend
// on s, so one precomputation serves every weight assembly; this is what
// makes the X-tilde quadrature affordable.
//
// Discretization: sup norms are maxima over stored samples, time integrals
// are trapezoid sums over the stored times, space integrals are Riemann
// sums. A single-time trajectory carries a zero-measure time window, so the
// L^2_T and L^4_T pieces vanish there.
class XstBlockData {
 public:
  explicit XstBlockData(const Trajectory& traj);

  XstReport assemble(double s, double eps) const;
  int j_max() const { return j_max_; }

 private:
  int j_max_ = 0;
  // Index 0 is the Delta_0 term of each component.
  std::vector<double> sobolev_;     // sup_t ||Delta_j u(t)||_2
  std::vector<double> smooth_;      // sup_x ( int_{y,T} |Delta_j u|^2 )^{1/2}
  std::vector<double> maximal_;     // ( int_x sup_{y,T} |Delta_j u|^2 )^{1/2}
  std::vector<double> strichartz_;  // ( int_{x,y,T} |Delta_j u|^4 )^{1/4}
};

XstReport xst_norms(const Trajectory& traj, double s, double eps = 0.01);
XstReport assemble_xst(const XstBlockData& data, double s, double eps = 0.01);

// Trapezoid quadrature of r -> ||.||_{X^r_T}^2 over [5/6, s].
double xtilde_norm(const Trajectory& traj, double s, int n_quad);
double xtilde_norm(const XstBlockData& data, double s, int n_quad,
                   double eps = 0.01);

}  // namespace zk
