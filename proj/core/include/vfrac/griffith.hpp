#pragma once

#include <functional>
#include <ostream>
#include <string_view>
#include <vector>

#include "vfrac/core.hpp"

namespace vfrac {

/// Energy profile E(l, t) given through its release rate G = -dE/dl.
struct EnergyProfile {
  std::function<double(double, double)> g;      ///< G(l, t)
  std::function<double(double, double)> de_dt;  ///< dE/dt(l, t); may be empty
  double l_min = 0.0;
  double l_max = 1.0;
  double t_min = 0.0;
  double t_max = 1.0;
  std::vector<double> breakpoints;  ///< kinks of G in l, honoured by the quadrature
  double reference = 0.0;           ///< E(reference, t) = 0
  bool lipschitz = true;

  bool contains(double l, double t) const noexcept { return l >= l_min && l <= l_max && t >= t_min && t <= t_max; }

  /// E(l, t) = -int_reference^l G(s, t) ds by Gauss-Legendre on pieces split at breakpoints.
  double energy(double l, double t) const;

  /// Throws DomainError if G < 0 at any point of an n x n grid over the domain.
  void check_nonnegative(int n = 41) const;
};

/// t (2 - ||l - 1| - 1|).
double figure3_profile(double l, double t);

/// The profile above on l in [0, 4], t in [0, 10] (where G >= 0), with the
/// closed-form dE/dt and breakpoints {0, 1, 2}.
EnergyProfile figure3_energy_profile(double reference = 0.0);

struct CrackTrajectory {
  enum class Status { completed, left_domain };

  std::vector<double> t;
  std::vector<double> length;
  std::vector<double> velocity;
  std::vector<double> release_rate;  ///< G(L(t), t)
  double g_c = 1.0;
  RateLaw law = RateLaw::linear(0.1);
  double l0 = 0.0;
  Status status = Status::completed;

  std::size_t size() const noexcept { return t.size(); }
};

std::string_view to_string(CrackTrajectory::Status s) noexcept;

/// Fixed-step RK4 for L' = beta*(G(L, t) - g_c), L(t0) = l0. If a stage leaves
/// the profile domain the trajectory ends there with status left_domain.
CrackTrajectory integrate_crack_length(const EnergyProfile& profile, double g_c, const RateLaw& law, double l0,
                                       double t0, double t1, double dt);

struct KktForms {
  bool triple = false;       ///< V >= 0, G <= G_c + a*(V), V (G_c + a*(V) - G) = 0, to tol
  bool closed_form = false;  ///< |a*(V) - (G - G_c)_+| <= tol
};

KktForms kkt_forms(double v, double g, double g_c, const RateLaw& law, double tol);

/// Triple form of the velocity-dependent Griffith criterion (the return value).
/// Use kkt_forms to compare it with the closed form.
bool kkt_check(double v, double g, double g_c, const RateLaw& law, double tol);

/// Per-sample |dE*_tot/dt + a*(V) V - dE/dt| with E*_tot = E(L, t) + G_c L, forward
/// differences and left-endpoint values (first order in dt). One value per interval.
std::vector<double> ode_dissipation_residuals(const CrackTrajectory& traj, const EnergyProfile& profile);

/// Max of ode_dissipation_residuals. Throws std::invalid_argument if the profile lacks dE/dt.
double ode_dissipation_check(const CrackTrajectory& traj, const EnergyProfile& profile);

/// Columns: t,L,V,G,residual (residual of the interval starting at t; empty on the last row).
void write_trajectory_csv(std::ostream& os, const CrackTrajectory& traj, const std::vector<double>& residuals);

}  // namespace vfrac
