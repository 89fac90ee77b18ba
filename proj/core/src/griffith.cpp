#include "vfrac/griffith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "vfrac/error.hpp"

namespace vfrac {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                       0.9061798459386640};
constexpr std::array<double, 5> kWeights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                         0.2369268850561891, 0.2369268850561891};

double gauss(const std::function<double(double, double)>& g, double a, double b, double t) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) s += kWeights[k] * g(mid + half * kNodes[k], t);
  return half * s;
}

// Antiderivative of 2 - ||s - 1| - 1| with H(0) = 0.
double figure3_antiderivative(double s) {
  if (s < 0.0) return 2.0 * s + 0.5 * s * s;
  if (s <= 1.0) return 2.0 * s - 0.5 * s * s;
  if (s <= 2.0) return 1.5 + 0.5 * (s * s - 1.0);
  return 3.0 + 4.0 * (s - 2.0) - 0.5 * (s * s - 4.0);
}

}  // namespace

double EnergyProfile::energy(double l, double t) const {
  if (!g) throw std::invalid_argument("energy profile has no G");
  const double a = std::min(reference, l);
  const double b = std::max(reference, l);
  if (a == b) return 0.0;
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  // Panels no longer than 1/64 of the l-domain keep smooth profiles accurate.
  const double panel = std::max((l_max - l_min) / 64.0, std::numeric_limits<double>::min());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int n = std::max(1, static_cast<int>(std::ceil(len / panel)));
    for (int k = 0; k < n; ++k) {
      integral += gauss(g, cuts[i] + len * k / n, cuts[i] + len * (k + 1) / n, t);
    }
  }
  return l >= reference ? -integral : integral;
}

void EnergyProfile::check_nonnegative(int n) const {
  if (n < 2) throw std::invalid_argument("check_nonnegative needs n >= 2");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double l = l_min + (l_max - l_min) * i / (n - 1);
      const double t = t_min + (t_max - t_min) * j / (n - 1);
      if (g(l, t) < 0.0) throw DomainError("energy release rate negative at l = " + std::to_string(l) + ", t = " + std::to_string(t));
    }
  }
}

double figure3_profile(double l, double t) { return t * (2.0 - std::abs(std::abs(l - 1.0) - 1.0)); }

EnergyProfile figure3_energy_profile(double reference) {
  EnergyProfile p;
  p.g = figure3_profile;
  const double h_ref = figure3_antiderivative(reference);
  p.de_dt = [h_ref](double l, double) { return -(figure3_antiderivative(l) - h_ref); };
  p.l_min = 0.0;
  p.l_max = 4.0;
  p.t_min = 0.0;
  p.t_max = 10.0;
  p.breakpoints = {0.0, 1.0, 2.0};
  p.reference = reference;
  return p;
}

std::string_view to_string(CrackTrajectory::Status s) noexcept {
  return s == CrackTrajectory::Status::completed ? "completed" : "left_domain";
}

CrackTrajectory integrate_crack_length(const EnergyProfile& profile, double g_c, const RateLaw& law, double l0,
                                       double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw DomainError("integrate_crack_length requires dt > 0");
  if (!(t1 > t0)) throw DomainError("integrate_crack_length requires t1 > t0");
  if (!profile.contains(l0, t0)) throw DomainError("initial length outside the profile domain");

  CrackTrajectory tr;
  tr.g_c = g_c;
  tr.law = law;
  tr.l0 = l0;
  const auto steps = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  tr.t.reserve(steps + 1);

  auto record = [&](double t, double l) {
    const double g = profile.g(l, t);
    tr.t.push_back(t);
    tr.length.push_back(l);
    tr.release_rate.push_back(g);
    tr.velocity.push_back(law.beta_star(g - g_c));
  };
  // Returns false when (l, t) is outside the domain.
  auto rhs = [&](double t, double l, double& out) {
    if (!profile.contains(l, t)) return false;
    out = law.beta_star(profile.g(l, t) - g_c);
    return true;
  };

  double l = l0;
  record(t0, l);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * dt;
    double k1, k2, k3, k4;
    const bool ok = rhs(t, l, k1) && rhs(t + 0.5 * dt, l + 0.5 * dt * k1, k2) && rhs(t + 0.5 * dt, l + 0.5 * dt * k2, k3) &&
                    rhs(t + dt, l + dt * k3, k4);
    const double next = ok ? l + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4) : l;
    if (!ok || !profile.contains(next, t + dt)) {
      tr.status = CrackTrajectory::Status::left_domain;
      break;
    }
    l = next;
    record(t0 + static_cast<double>(n + 1) * dt, l);
  }
  return tr;
}

KktForms kkt_forms(double v, double g, double g_c, const RateLaw& law, double tol) {
  KktForms f;
  if (!(v >= 0.0)) return f;
  const double a = law.alpha_star(v);
  const double gap = g_c + a - g;
  f.triple = gap >= -tol && std::abs(v * gap) <= tol;
  f.closed_form = std::abs(a - positive_part(g - g_c)) <= tol;
  return f;
}

bool kkt_check(double v, double g, double g_c, const RateLaw& law, double tol) {
  return kkt_forms(v, g, g_c, law, tol).triple;
}

std::vector<double> ode_dissipation_residuals(const CrackTrajectory& traj, const EnergyProfile& profile) {
  if (!profile.de_dt) throw std::invalid_argument("ode dissipation check needs dE/dt on the profile");
  std::vector<double> out;
  if (traj.size() < 2) return out;
  out.reserve(traj.size() - 1);
  double e_prev = profile.energy(traj.length[0], traj.t[0]) + traj.g_c * traj.length[0];
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const double e_next = profile.energy(traj.length[n + 1], traj.t[n + 1]) + traj.g_c * traj.length[n + 1];
    const double dt = traj.t[n + 1] - traj.t[n];
    const double v = traj.velocity[n];
    const double r = (e_next - e_prev) / dt + traj.law.alpha_star(v) * v - profile.de_dt(traj.length[n], traj.t[n]);
    out.push_back(std::abs(r));
    e_prev = e_next;
  }
  return out;
}

double ode_dissipation_check(const CrackTrajectory& traj, const EnergyProfile& profile) {
  const auto r = ode_dissipation_residuals(traj, profile);
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

void write_trajectory_csv(std::ostream& os, const CrackTrajectory& traj, const std::vector<double>& residuals) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "t,L,V,G,residual\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << traj.t[i] << ',' << traj.length[i] << ',' << traj.velocity[i] << ',' << traj.release_rate[i] << ',';
    if (i < residuals.size()) os << residuals[i];
    os << '\n';
  }
}

}  // namespace vfrac
