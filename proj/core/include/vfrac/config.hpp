#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "vfrac/core.hpp"
#include "vfrac/mesh.hpp"

namespace vfrac {

/// Scalar time profile s(t) multiplying a spatial load shape.
struct TimeProfile {
  enum class Kind { zero, constant, linear, ramp_hold };
  Kind kind = Kind::zero;
  double scale = 1.0;   ///< constant value, slope of `linear`, plateau of `ramp_hold`
  double t_ramp = 1.0;  ///< ramp duration for ramp_hold (ramp starts at t = 0)

  static TimeProfile zero() { return {}; }
  static TimeProfile constant(double c) { return {Kind::constant, c, 1.0}; }
  static TimeProfile linear(double rate) { return {Kind::linear, rate, 1.0}; }
  static TimeProfile ramp_hold(double plateau, double t_ramp) { return {Kind::ramp_hold, plateau, t_ramp}; }

  double value(double t) const noexcept;
  /// ds/dt; at the ramp_hold kink the left derivative is returned.
  double rate(double t) const noexcept;
  /// Times where rate() is discontinuous.
  std::vector<double> kinks() const;
};

/// g(x, t) = s(t) * (A x + c) on Dirichlet nodes, f(t) = s_f(t) f0 in Omega,
/// q(t) = s_q(t) q0 on neumann_loaded edges.
struct LoadProgram {
  TimeProfile dirichlet_profile = TimeProfile::zero();
  std::array<double, 4> dirichlet_gradient{0.0, 0.0, 0.0, 0.0};  ///< row-major A
  Point dirichlet_offset;                                         ///< c
  TimeProfile body_force_profile = TimeProfile::zero();
  Point body_force;
  TimeProfile traction_profile = TimeProfile::zero();
  Point traction;

  /// Cross-checks analytic rates against central differences on [t0, t1].
  /// Throws ConfigError when they disagree by more than `tol`.
  void verify_rates(double t0, double t1, double tol = 1e-6) const;

  /// Pure-shear strip loading u = (0, +-a) on y = +-half_height, ramped over t_ramp.
  static LoadProgram strip_shear(double amplitude, double half_height, double t_ramp);
};

struct MeshSpec {
  double width = 1.0;
  double height = 1.0;
  double h = 0.1;
  Point origin;
  TagRule tags;
};

struct InitialDamage {
  enum class Kind { zero, constant, seed_crack };
  Kind kind = Kind::zero;
  double value = 0.0;  ///< constant damage level
  Point from;          ///< seed segment start
  Point to;            ///< seed segment end
};

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 0.01;

  std::size_t steps() const;
};

struct OutputControls {
  int vtk_every = 0;  ///< 0 disables snapshots
  bool strip_diagnostics = false;
  double crack_line_y = std::numeric_limits<double>::quiet_NaN();  ///< NaN: mesh mid-height
  double tip_threshold = 0.5;
  double end_margin = std::numeric_limits<double>::quiet_NaN();  ///< NaN: height of the mesh (2H)
  double steady_tolerance = 0.05;
  double dissipation_tolerance = 0.05;
  /// Strip beta is integrated over |x - x_tip| <= beta_window, which keeps the
  /// stationary layers at the seed and the free ends out. NaN: half the mesh height (H).
  double beta_window = std::numeric_limits<double>::quiet_NaN();
};

/// semi_implicit: one phase-field step per time step with w frozen at u(t_n).
/// trapezoidal: predictor step, then corrector passes that average the energy
/// gradient between the old state and u*(z_new, t_{n+1}) (quasi-static runs only).
enum class TimeScheme { semi_implicit, trapezoidal };
std::string_view to_string(TimeScheme s) noexcept;

struct SolverControls {
  double residual_tolerance = 1e-10;
  TimeScheme time_scheme = TimeScheme::semi_implicit;
  /// Trapezoidal only: corrector passes stop once max |dz| between passes is at
  /// most corrector_tolerance, or after corrector_passes. Each pass costs one
  /// elasticity and one phase-field solve.
  int corrector_passes = 20;
  double corrector_tolerance = 1e-5;
  double stop_tip_x = std::numeric_limits<double>::quiet_NaN();  ///< stop once the tip passes x
  bool stability_warnings = true;
};

struct ScenarioConfig {
  std::string name = "scenario";
  MeshSpec mesh;
  MaterialParams material;
  LoadProgram loads;
  TimeGrid time;
  InitialDamage initial_damage;
  OutputControls output;
  SolverControls solver;

  void validate() const;
};

/// Strict JSON reader: unknown keys and type mismatches raise ConfigError.
ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);
std::string to_json(const ScenarioConfig& cfg, int indent = 2);

/// Figure-3 sweep of the crack-growth ODE: G = t (2 - ||l - 1| - 1|).
struct Figure3Config {
  std::vector<double> alphas{0.01, 0.05, 0.1, 0.2};
  double dt = 1e-4;
  double l0 = 0.0;
  double t0 = 0.0;
  double t1 = 1.2;
  double g_c = 1.0;

  void validate() const;
};

Figure3Config parse_figure3_config(const std::string& json_text);
Figure3Config load_figure3_config(const std::string& path);
std::string to_json(const Figure3Config& cfg, int indent = 2);

/// Strip (0, W) x (-H, H) with a seed crack along y = 0 from the left edge.
struct StripGeometry {
  double half_height = 1.0;
  double width = 10.0;  ///< W = 10 H unless given
  double h = 0.05;
  double seed_length = 1.0;
};

/// Traveling-wave sweep over amplitudes a and rate coefficients alpha.
struct TravelWaveConfig {
  std::string name = "travelwave";
  StripGeometry strip;
  MaterialParams material;  ///< rate_law is replaced by linear(alpha) per run
  std::vector<double> amplitudes;
  std::vector<double> alphas;
  double t_ramp = 0.1;
  TimeGrid time;
  OutputControls output;  ///< strip_diagnostics is forced on
  SolverControls solver;  ///< stop_tip_x defaults to W - end margin
  int workers = 0;        ///< 0: hardware concurrency

  void validate() const;
};

TravelWaveConfig parse_travelwave_config(const std::string& json_text);
TravelWaveConfig load_travelwave_config(const std::string& path);
std::string to_json(const TravelWaveConfig& cfg, int indent = 2);

RateLaw parse_rate_law(const std::string& json_text);
std::string to_json(const RateLaw& law);

}  // namespace vfrac
