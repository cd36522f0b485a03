#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "zk/config.hpp"
#include "zk/evolution.hpp"
#include "zk/ground_state.hpp"
#include "zk/norms.hpp"

namespace zk {

struct ScenarioResult {
  int exit_code = 0;
  std::map<std::string, std::string> summary;
};

// Scenario drivers. Each one resolves its configuration (rejecting unknown
// keys), runs, writes CSV reports, field snapshots, a machine-readable
// summary and a config echo into out_dir, and reflects its assertions in
// the exit code.
ScenarioResult run_groundstate(RunConfig& cfg,
                               const std::filesystem::path& out_dir);
ScenarioResult run_conservation(RunConfig& cfg,
                                const std::filesystem::path& out_dir);
ScenarioResult run_soliton(RunConfig& cfg,
                           const std::filesystem::path& out_dir);
ScenarioResult run_illposed(RunConfig& cfg,
                            const std::filesystem::path& out_dir);
ScenarioResult run_pointwise(RunConfig& cfg,
                             const std::filesystem::path& out_dir);
ScenarioResult run_threshold(RunConfig& cfg,
                             const std::filesystem::path& out_dir);
ScenarioResult run_norms(RunConfig& cfg, const std::filesystem::path& out_dir);
ScenarioResult run_generic(RunConfig& cfg,
                           const std::filesystem::path& out_dir);

ScenarioResult run_scenario(const std::string& name, RunConfig& cfg,
                            const std::filesystem::path& out_dir);

// Shared pieces, also exercised directly by the acceptance suite.

// Rebuild the derived ground-state record from a stored phi field.
GroundState ground_state_from_field(RealField phi, double pad = 1.5);

// Sub-grid x-shift of `moved` relative to `base` from the phase of the
// cross-correlation, refined by local quadratic interpolation.
double correlation_shift_x(const RealField& moved, const RealField& base);

struct EpsLadderRow {
  double epsilon;
  double linf_l2;  // sup over stored times of ||u_eps - u||_2
  double l4_linf;  // discrete L^4_{x,y} L^inf_T surrogate of the difference
};

// Mollified runs against the exact run over a ladder of epsilons.
std::vector<EpsLadderRow> mollified_ladder(const RealField& u0,
                                           const std::vector<double>& eps,
                                           const EvolutionConfig& base_cfg);

// Trajectory directory: ZKF1 snapshots plus an index file times.csv with
// header "index,t,file".
void write_trajectory_dir(const std::filesystem::path& dir,
                          const Trajectory& traj, const std::string& run_id);
Trajectory read_trajectory_dir(const std::filesystem::path& dir);

std::string format_g17(double v);

}  // namespace zk
