#pragma once

#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace vfrac {

/// (c)_+ = max(c, 0).
constexpr double positive_part(double c) noexcept { return c > 0.0 ? c : 0.0; }

/// True iff |a - (a - b)_+| <= tol.
///
/// With tol = 0 this is equivalent to the triple a >= 0, b >= 0, a*b = 0,
/// which is the complementarity structure behind every Griffith-type
/// criterion in the library.
bool check_complementarity(double a, double b, double tol) noexcept;

// ---------------------------------------------------------------------------
// Velocity-dependent excess fracture energy alpha*(V).

struct LinearRate {
  double alpha;  ///< alpha*(V) = alpha * V
};

struct PowerRate {
  double k;  ///< alpha*(V) = k * V^p
  double p;
};

/// Piecewise-linear alpha*(V) through (v_i, alpha_i); the first sample must be (0, 0).
struct TabulatedRate {
  std::vector<std::pair<double, double>> samples;
};

/// Strictly increasing continuous map alpha* : [0, inf) -> [0, inf) with alpha*(0) = 0.
///
/// Only alpha* is stored; its generalized inverse beta* is derived on demand so
/// the two can never disagree.
class RateLaw {
 public:
  using Kind = std::variant<LinearRate, PowerRate, TabulatedRate>;

  static RateLaw linear(double alpha);
  static RateLaw power(double k, double p);
  static RateLaw tabulated(std::vector<std::pair<double, double>> samples);

  const Kind& kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  /// True when alpha*(V) = c * V exactly (linear, or power with p == 1).
  bool is_proportional() const noexcept;
  /// c for proportional laws; meaningless otherwise.
  double proportional_coefficient() const noexcept;

  /// alpha*(v); throws DomainError for v < 0, OutOfRangeError beyond a table.
  double alpha_star(double v) const;

  /// beta*(s) = 0 for s < 0, (alpha*)^{-1}(s) otherwise.
  double beta_star(double s) const;

  /// d alpha*/dV at v (right derivative at table knots; +inf for p < 1 at v = 0).
  double slope(double v) const;

 private:
  explicit RateLaw(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

double alpha_star(const RateLaw& law, double v);
double beta_star(const RateLaw& law, double s);

// ---------------------------------------------------------------------------
// Material.

enum class PlaneMode { plane_strain, plane_stress };

std::string_view to_string(PlaneMode m) noexcept;
PlaneMode plane_mode_from_string(std::string_view s);

struct MaterialParams {
  double lame_lambda = 1.0;
  double lame_mu = 1.0;
  PlaneMode plane_mode = PlaneMode::plane_strain;
  double g_c = 1.0;
  double epsilon = 0.1;
  RateLaw rate_law = RateLaw::linear(0.1);
  double friction_alpha_u = 0.0;
  /// eta in the degradation (1 - zbar)^2 + eta.
  double residual_stiffness = 1e-6;

  static MaterialParams from_young_poisson(double young, double poisson, PlaneMode mode);

  /// Lambda entering the 2D constitutive law: lambda for plane strain,
  /// 2*lambda*mu/(lambda + 2*mu) for plane stress.
  double effective_lambda() const noexcept;

  /// lambda~ + 2 mu, the uniaxial-strain modulus of the 2D law.
  double p_wave_modulus() const noexcept { return effective_lambda() + 2.0 * lame_mu; }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

}  // namespace vfrac
