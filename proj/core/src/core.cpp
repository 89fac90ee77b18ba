#include "vfrac/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vfrac/error.hpp"

namespace vfrac {

bool check_complementarity(double a, double b, double tol) noexcept {
  return std::abs(a - positive_part(a - b)) <= tol;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Index of the table segment containing x in column `col` (0: v, 1: alpha).
std::size_t find_segment(const std::vector<std::pair<double, double>>& s, double x, int col) {
  auto key = [col](const std::pair<double, double>& p) { return col == 0 ? p.first : p.second; };
  auto it = std::upper_bound(s.begin(), s.end(), x,
                             [&](double value, const auto& p) { return value < key(p); });
  std::size_t i = static_cast<std::size_t>(std::distance(s.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, s.size() - 2);
}

double table_alpha(const TabulatedRate& t, double v) {
  const auto& s = t.samples;
  if (v > s.back().first) {
    throw OutOfRangeError("tabulated rate law queried at V = " + std::to_string(v) +
                          " beyond last sample " + std::to_string(s.back().first));
  }
  std::size_t i = find_segment(s, v, 0);
  const auto [v0, a0] = s[i];
  const auto [v1, a1] = s[i + 1];
  return a0 + (a1 - a0) * (v - v0) / (v1 - v0);
}

}  // namespace

RateLaw RateLaw::linear(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("linear rate law requires alpha > 0");
  }
  return RateLaw(LinearRate{alpha});
}

RateLaw RateLaw::power(double k, double p) {
  if (!(k > 0.0) || !(p > 0.0) || !std::isfinite(k) || !std::isfinite(p)) {
    throw ConfigError("power rate law requires k > 0 and p > 0");
  }
  return RateLaw(PowerRate{k, p});
}

RateLaw RateLaw::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ConfigError("tabulated rate law needs at least two samples");
  if (samples.front().first != 0.0 || samples.front().second != 0.0) {
    throw ConfigError("tabulated rate law must start at (0, 0)");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first) || !(samples[i].second > samples[i - 1].second)) {
      throw ConfigError("tabulated rate law must be strictly increasing in V and alpha*(V)");
    }
  }
  return RateLaw(TabulatedRate{std::move(samples)});
}

std::string_view RateLaw::name() const noexcept {
  return std::visit(overloaded{[](const LinearRate&) { return std::string_view("linear"); },
                               [](const PowerRate&) { return std::string_view("power"); },
                               [](const TabulatedRate&) { return std::string_view("tabulated"); }},
                    kind_);
}

bool RateLaw::is_proportional() const noexcept {
  if (std::holds_alternative<LinearRate>(kind_)) return true;
  if (const auto* p = std::get_if<PowerRate>(&kind_)) return p->p == 1.0;
  return false;
}

double RateLaw::proportional_coefficient() const noexcept {
  if (const auto* l = std::get_if<LinearRate>(&kind_)) return l->alpha;
  if (const auto* p = std::get_if<PowerRate>(&kind_)) return p->k;
  return std::numeric_limits<double>::quiet_NaN();
}

double RateLaw::alpha_star(double v) const {
  if (!(v >= 0.0)) throw DomainError("alpha*(V) requires V >= 0, got " + std::to_string(v));
  return std::visit(overloaded{[v](const LinearRate& l) { return l.alpha * v; },
                               [v](const PowerRate& p) { return p.k * std::pow(v, p.p); },
                               [v](const TabulatedRate& t) { return table_alpha(t, v); }},
                    kind_);
}

double RateLaw::beta_star(double s) const {
  if (!(s > 0.0)) {
    if (std::isnan(s)) throw DomainError("beta*(s) requires finite s");
    return 0.0;
  }
  return std::visit(
      overloaded{[s](const LinearRate& l) { return s / l.alpha; },
                 [s](const PowerRate& p) { return std::pow(s / p.k, 1.0 / p.p); },
                 [s](const TabulatedRate& t) {
                   const auto& smp = t.samples;
                   if (s > smp.back().second) {
                     throw OutOfRangeError("tabulated rate law does not cover alpha* = " +
                                           std::to_string(s));
                   }
                   // Monotone bisection on the piecewise-linear alpha*.
                   std::size_t i = find_segment(smp, s, 1);
                   double lo = smp[i].first;
                   double hi = smp[i + 1].first;
                   for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                     const double mid = 0.5 * (lo + hi);
                     if (table_alpha(t, mid) < s) {
                       lo = mid;
                     } else {
                       hi = mid;
                     }
                   }
                   return 0.5 * (lo + hi);
                 }},
      kind_);
}

double RateLaw::slope(double v) const {
  if (!(v >= 0.0)) throw DomainError("alpha*'(V) requires V >= 0");
  return std::visit(
      overloaded{[](const LinearRate& l) { return l.alpha; },
                 [v](const PowerRate& p) {
                   if (p.p == 1.0) return p.k;
                   if (v == 0.0) return p.p < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
                   return p.k * p.p * std::pow(v, p.p - 1.0);
                 },
                 [v](const TabulatedRate& t) {
                   const auto& s = t.samples;
                   if (v > s.back().first) throw OutOfRangeError("tabulated rate law slope out of range");
                   std::size_t i = find_segment(s, v, 0);
                   return (s[i + 1].second - s[i].second) / (s[i + 1].first - s[i].first);
                 }},
      kind_);
}

double alpha_star(const RateLaw& law, double v) { return law.alpha_star(v); }
double beta_star(const RateLaw& law, double s) { return law.beta_star(s); }

std::string_view to_string(PlaneMode m) noexcept {
  return m == PlaneMode::plane_stress ? "plane_stress" : "plane_strain";
}

PlaneMode plane_mode_from_string(std::string_view s) {
  if (s == "plane_strain") return PlaneMode::plane_strain;
  if (s == "plane_stress") return PlaneMode::plane_stress;
  throw ConfigError("unknown plane mode '" + std::string(s) + "'");
}

MaterialParams MaterialParams::from_young_poisson(double young, double poisson, PlaneMode mode) {
  MaterialParams m;
  m.lame_mu = young / (2.0 * (1.0 + poisson));
  m.lame_lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  m.plane_mode = mode;
  return m;
}

double MaterialParams::effective_lambda() const noexcept {
  if (plane_mode == PlaneMode::plane_stress) {
    return 2.0 * lame_lambda * lame_mu / (lame_lambda + 2.0 * lame_mu);
  }
  return lame_lambda;
}

void MaterialParams::validate() const {
  if (!(lame_mu > 0.0)) throw ConfigError("material: lame_mu must be > 0");
  if (!(lame_lambda + lame_mu > 0.0)) throw ConfigError("material: lame_lambda + lame_mu must be > 0");
  if (!(g_c > 0.0)) throw ConfigError("material: g_c must be > 0");
  if (!(epsilon > 0.0)) throw ConfigError("material: epsilon must be > 0");
  if (!(friction_alpha_u >= 0.0)) throw ConfigError("material: friction_alpha_u must be >= 0");
  if (!(residual_stiffness >= 0.0)) throw ConfigError("material: residual_stiffness must be >= 0");
}

}  // namespace vfrac
