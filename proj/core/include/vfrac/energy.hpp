#pragma once

#include <cstddef>
#include <limits>
#include <ostream>
#include <vector>

#include "vfrac/core.hpp"
#include "vfrac/elasticity.hpp"
#include "vfrac/mesh.hpp"

namespace vfrac {

// ---------------------------------------------------------------------------
// Energy ledger

/// One ledger row. Interval quantities (power, dissipation, residual) refer to
/// (t_{n-1}, t_n] and are stored on the later entry; they are NaN on the first.
struct LedgerEntry {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  std::size_t step = 0;
  double t = 0.0;
  double e_el = 0.0;   ///< minimal damaged elastic energy at (t, z)
  double e_s = 0.0;    ///< surface energy of z
  double e_tot = 0.0;  ///< e_el + e_s
  double fdot = 0.0;   ///< instantaneous power input at (t, z)
  double power = nan;        ///< interval work / dt (NaN: use the midpoint of fdot)
  double dissipation = nan;  ///< interval dissipation rate
  double residual = nan;
  double rel_residual = nan;
};

/// r = (E_tot(t_n) - E_tot(t_{n-1}))/dt + D - P for the interval ending at `next`.
/// P is next.power, or the midpoint of fdot when that is NaN.
double dissipation_residual(const LedgerEntry& prev, const LedgerEntry& next);

/// |r| relative to the largest of |P|, D, |dE_tot/dt| and a roundoff floor
/// of 1e-9 max(|E_tot|)/dt.
double relative_dissipation_residual(const LedgerEntry& prev, const LedgerEntry& next);

class EnergyLedger {
 public:
  /// Appends a row, computing residual and rel_residual for every row after
  /// the first. Throws std::invalid_argument when E_s < 0, D < 0, or time does not advance.
  void append(LedgerEntry entry);

  const std::vector<LedgerEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double max_abs_residual() const noexcept;
  double max_rel_residual() const noexcept;
  /// sum |r_n| dt_n over the run.
  double integrated_abs_residual() const noexcept;

  /// Columns: step,t,E_el,E_s,E_tot,Fdot,P,D,residual,rel_residual.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<LedgerEntry> entries_;
};

/// sum_i M_i alpha*(v_i) v_i with v = (z_next - z_prev)/dt (alpha sum M v^2 for a linear law).
double dissipation_rate(const TriMesh& mesh, const NodalField& z_prev, const NodalField& z_next, double dt,
                        const RateLaw& law);

/// alpha_u sum_i M_i |(u_next - u_prev)/dt|^2, the friction term of relaxed elasticity.
double friction_dissipation_rate(const TriMesh& mesh, const NodalField& u_prev, const NodalField& u_next, double dt,
                                 double alpha_u);

/// External work over [t_a, t_b] divided by dt, by the trapezoidal rule in each
/// load increment: dg.(R_a + R_b)/2 - df.(u_a + u_b)/2 - dq.(u_a + u_b)/2.
/// Exact for piecewise-linear loads even across a ramp kink.
double interval_power(const TriMesh& mesh, const LoadState& a, const LoadState& b, const Eigen::VectorXd& reactions_a,
                      const Eigen::VectorXd& reactions_b, const NodalField& u_a, const NodalField& u_b);

// ---------------------------------------------------------------------------
// Strip diagnostics

/// (E_s(z_now) - E_s(z_ref)) / G_c.
double regularized_crack_increment(const TriMesh& mesh, const NodalField& z_now, const NodalField& z_ref,
                                   const MaterialParams& mat);

/// sum_e A_e (dz/dx1)^2.
double beta_integral(const NodalField& z, const TriMesh& mesh);

/// Same sum restricted to elements whose centroid has x in [x_lo, x_hi].
double beta_integral(const NodalField& z, const TriMesh& mesh, double x_lo, double x_hi);

/// Largest x on the node row nearest to y = line_y with z >= threshold,
/// linearly interpolated towards the next node. NaN when no node qualifies.
double crack_tip_position(const TriMesh& mesh, const NodalField& z, double line_y, double threshold = 0.5);

struct StripSample {
  std::size_t step = 0;
  double t = 0.0;
  double x_tip = 0.0;
  double l_eps = 0.0;  ///< regularized crack length increment since t0
  double e_eps = 0.0;  ///< damaged elastic energy (only its slope matters)
  double beta = 0.0;
};

/// Columns: step,t,x_tip,L_eps,E_eps,beta.
void write_strip_csv(std::ostream& os, const std::vector<StripSample>& samples);

/// Least-squares slope of y against x. Throws std::invalid_argument for fewer
/// than 2 points or zero spread in x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SteadyWindowOptions {
  double tolerance = 0.05;  ///< max relative spread of tip increments
  double x_min = -std::numeric_limits<double>::infinity();  ///< tip must lie in [x_min, x_max]
  double x_max = std::numeric_limits<double>::infinity();
  /// Increments are taken over enough samples to advance at least this far,
  /// which averages out grid-scale jitter of the interpolated tip. When > 0
  /// only windows with a positive mean advance qualify.
  double min_advance = 0.0;
};

/// Indices [begin, end) of the longest stretch of samples whose strided tip
/// increments vary by less than `tolerance` relative to their mean.
struct SteadyWindow {
  bool found = false;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t stride = 1;
};

SteadyWindow find_steady_window(const std::vector<double>& t, const std::vector<double>& x_tip,
                                const SteadyWindowOptions& opts = {});

/// Least-squares tip speed over the steady window. Throws NoSteadyWindowError.
double estimate_crack_velocity(const std::vector<double>& t, const std::vector<double>& x_tip,
                               const SteadyWindowOptions& opts = {});

/// -(dE_eps/dt) / V; V <= 0 is a DomainError.
double effective_fracture_energy(double de_dt, double velocity);

/// Steady-state quantities extracted from a strip run.
struct StripAnalysis {
  bool steady = false;
  SteadyWindow window;
  double velocity = std::numeric_limits<double>::quiet_NaN();
  double de_dt = std::numeric_limits<double>::quiet_NaN();
  double dl_dt = std::numeric_limits<double>::quiet_NaN();
  double beta_mean = std::numeric_limits<double>::quiet_NaN();
  double beta_spread = std::numeric_limits<double>::quiet_NaN();  ///< (max - min) / mean over the window
  double g_c_eps = std::numeric_limits<double>::quiet_NaN();
  double l_ratio = std::numeric_limits<double>::quiet_NaN();      ///< dL_eps/dt / V
  /// Residual of d/dt(E_eps + G_c L_eps) + alpha beta V^2, relative to alpha beta V^2.
  double identity_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Never throws for missing steady state; `steady` is false instead.
StripAnalysis analyze_strip(const std::vector<StripSample>& samples, const MaterialParams& mat,
                            const SteadyWindowOptions& opts);

}  // namespace vfrac
