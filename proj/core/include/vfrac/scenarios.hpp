#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vfrac/config.hpp"
#include "vfrac/elasticity.hpp"
#include "vfrac/energy.hpp"
#include "vfrac/griffith.hpp"
#include "vfrac/mesh.hpp"

namespace vfrac {

// ---------------------------------------------------------------------------
// Coupled phase-field runs

/// Initial damage on the mesh. seed_crack uses z = exp(-dist/eps) to the seed
/// segment. Nodes where z is pinned are set to 0.
NodalField initial_damage_field(const TriMesh& mesh, const InitialDamage& spec, double epsilon);

enum class RunStatus { ok, failed_identity, solver_failure };
std::string_view to_string(RunStatus s) noexcept;

struct FpfmResult {
  RunStatus status = RunStatus::ok;
  std::string message;  ///< solver diagnostic when status is solver_failure
  EnergyLedger ledger;
  std::vector<StripSample> strip;  ///< empty unless strip diagnostics are on
  StripAnalysis analysis;
  TriMesh mesh;
  NodalField u;  ///< last consistent state
  NodalField z;
  std::size_t steps = 0;
  std::size_t irreversibility_violations = 0;
  std::size_t range_violations = 0;
  std::size_t stability_warnings = 0;
  std::size_t corrector_passes = 0;       ///< total, trapezoidal scheme only
  std::size_t unconverged_correctors = 0; ///< steps that hit the pass cap
  bool stopped_at_tip = false;
  double wall_seconds = 0.0;
};

/// Staggered loop: u(t_n, z_n) -> w -> z_{n+1} -> u(t_{n+1}, z_{n+1}) -> ledger row.
/// With a non-empty out_dir writes ledger.csv, strip.csv, vtk/, config.json and summary.json.
/// Solver failures are caught: the result carries status solver_failure and the
/// last consistent state, which is also written.
FpfmResult run_fpfm(const ScenarioConfig& cfg, const std::string& out_dir = "");

/// Writes summary.json for a finished run.
void write_summary(const std::string& path, const ScenarioConfig& cfg, const FpfmResult& result);

// ---------------------------------------------------------------------------
// Figure-3 ODE sweep

struct Figure3Result {
  std::vector<double> alphas;  ///< ascending
  std::vector<CrackTrajectory> trajectories;
  std::vector<double> max_residuals;  ///< ODE dissipation check per alpha
};

/// One integrate_crack_length per alpha (sorted ascending) on the Figure-3 profile.
Figure3Result run_figure3(const Figure3Config& cfg);

/// Writes figure3.csv (t, L_<alpha>...), trajectory_alpha_<alpha>.csv (t, L, V, G, residual)
/// and figure3_summary.json into out_dir.
void write_figure3(const std::string& out_dir, const Figure3Config& cfg, const Figure3Result& result);

/// L(t) by linear interpolation on a trajectory; throws std::out_of_range outside it.
double length_at(const CrackTrajectory& traj, double t);

/// (L(tb) - L(ta)) / (L(t_end) - L(t_start)); 0 when there is no growth.
double growth_fraction(const CrackTrajectory& traj, double ta, double tb);

// ---------------------------------------------------------------------------
// Traveling-wave sweep

/// Strip config for one (a, alpha): Dirichlet top/bottom with u = (0, a y / H)
/// ramped over t_ramp, free sides, seed crack (0, 0)-(seed_length, 0).
ScenarioConfig strip_scenario(const TravelWaveConfig& cfg, double amplitude, double alpha);

struct TravelWaveRow {
  double amplitude = 0.0;
  double alpha = 0.0;
  RunStatus status = RunStatus::ok;
  bool steady = false;
  double velocity = 0.0;
  double g_c_eps = 0.0;
  double beta = 0.0;
  double l_ratio = 0.0;
  double identity_residual = 0.0;
  double max_rel_residual = 0.0;
  std::size_t irreversibility_violations = 0;
  std::size_t range_violations = 0;
  double wall_seconds = 0.0;
};

struct TravelWaveResult {
  std::vector<TravelWaveRow> rows;  ///< amplitude-major, alphas inner, in config order
};

/// Runs every (a, alpha) pair on a worker pool. Per-run outputs go to
/// out_dir/run_<i>/ when out_dir is non-empty; table.csv, summary.json (fits),
/// config.json and timing.json are written last.
TravelWaveResult run_traveling_wave(const TravelWaveConfig& cfg, const std::string& out_dir = "");

/// Columns: amplitude,alpha,status,steady,V,G_c_eps,beta,L_ratio,identity_residual,max_rel_residual,
/// irreversibility_violations,range_violations.
void write_travelwave_table(std::ostream& os, const TravelWaveResult& result);

/// Linear fit y = intercept + slope x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// G_c^eps against V for one alpha, over the OK runs with a steady window.
struct SweepFit {
  double alpha = 0.0;
  std::size_t points = 0;
  LineFit fit;  ///< NaN with fewer than 2 points
  double beta_mean = 0.0;
};

/// One fit per distinct alpha, in order of first appearance.
std::vector<SweepFit> sweep_fits(const TravelWaveResult& result);

// ---------------------------------------------------------------------------
// Seed checks: invariants evaluated on a loaded config before any long run.

struct SeedCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Mesh validity and area, load-rate consistency, initial damage range,
/// minimality of the elastic solve, driving force against finite differences
/// of the discrete energy, one-step irreversibility and the rate-law inverse.
std::vector<SeedCheck> seed_check(const ScenarioConfig& cfg);

/// Profile non-negativity, the KKT form of V = beta*(G - G_c) on a grid for
/// every alpha, and monotone growth over a short integration.
std::vector<SeedCheck> seed_check(const Figure3Config& cfg);

/// Scenario checks on the first (a, alpha) strip, plus the rate-law inverse for every alpha.
std::vector<SeedCheck> seed_check(const TravelWaveConfig& cfg);

}  // namespace vfrac
