#pragma once

#include <utility>
#include <vector>

#include "zk/field.hpp"

namespace zk {

// Converged positive radial solution of Delta(phi) - phi + phi^{7/3} = 0,
// with the functionals needed by the sharp-constant and soliton machinery.
struct GroundState {
  GridPtr grid;
  RealField phi;
  double l2_norm = 0.0;
  double grad_l2_norm = 0.0;
  double p_norm_10_3 = 0.0;  // (int |phi|^{10/3})^{3/10}
  double c_opt = 0.0;
  double pohozaev_residual_1 = 0.0;
  double pohozaev_residual_2 = 0.0;
  int iterations = 0;
  bool converged = false;
  bool decay_resolved = false;  // phi at half box radius < 1e-6 of its peak
  std::vector<double> residual_history;
  std::vector<double> s_history;  // stabilizing ratio per iteration
};

struct PetviashviliParams {
  double amplitude_seed = 1.0;
  double gamma = 1.75;  // p/(p-1) for p = 7/3
  double tol = 1e-10;
  int max_iter = 500;
  double pad = 1.5;
  double seed_width = 1.0;
};

// Fixed-point iteration phi <- S^gamma (1-Delta)^{-1} phi^{7/3} with the
// stabilizing ratio S = <(1-Delta)phi, phi> / <phi^{7/3}, phi>. Converged
// when the successive relative L2 change drops below tol and the equation
// residual below 10*tol. Throws on collapse or non-convergence.
GroundState petviashvili_solve(GridPtr grid, const PetviashviliParams& params);
GroundState petviashvili_solve(GridPtr grid, double amplitude_seed,
                               double gamma, double tol, int max_iter);

// r1: multiply the equation by phi and integrate.
// r2: Pohozaev identity for d = 3, p = 7/3.
// Both normalized by ||phi||_2^2.
std::pair<double, double> pohozaev_residuals(const GroundState& gs);

struct GnConstant {
  double c_opt;
  double mass_threshold;
};

// Sharp Gagliardo-Nirenberg constant (5/3)^{3/10} / ||phi||_2^{2/5} and the
// global-existence mass threshold ||phi||_2.
GnConstant gn_constant(const GroundState& gs);

// ||w||_{10/3} / ( ||grad w||_2^{3/5} ||w||_2^{2/5} ); equals c_opt at phi.
double gn_ratio(const RealField& w);

// Radial evaluation of a centered field: trigonometric interpolation of the
// x-axis restriction (exact for grid data), with an exponential tail fitted
// past 0.85 of the half-period so corner radii stay meaningful.
class RadialProfile {
 public:
  explicit RadialProfile(const RealField& centered);
  double operator()(double r) const;
  double max_radius() const { return r_max_; }

 private:
  double dr_, r_max_, joint_;
  std::vector<double> table_;
};

// Traveling-wave field c^{3/4} phi(c^{1/2} rho) with
// rho = sqrt((x - center_x - c t)^2 + |y|^2), periodically wrapped in x.
RealField soliton_field(const GroundState& gs, double c, double t,
                        double center_x = 0.0);

// Scaled profile resolvable on the grid: c^{1/2} h within `frac` of the unit
// decay scale of phi.
bool soliton_resolved(const Grid3& g, double c, double frac = 0.5);

// Independent 1D check: shooting solve of the radial reduction
// f'' + (2/r) f' - f + f^{7/3} = 0. Returns f on the uniform grid r = i*dr.
std::vector<double> shooting_radial_profile(double r_max, double dr);

}  // namespace zk
