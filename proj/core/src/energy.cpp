#include "vfrac/energy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "vfrac/error.hpp"
#include "vfrac/phasefield.hpp"

namespace vfrac {

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

double interval_power_of(const LedgerEntry& prev, const LedgerEntry& next) {
  return std::isnan(next.power) ? 0.5 * (prev.fdot + next.fdot) : next.power;
}

}  // namespace

double dissipation_residual(const LedgerEntry& prev, const LedgerEntry& next) {
  const double dt = next.t - prev.t;
  const double d = std::isnan(next.dissipation) ? 0.0 : next.dissipation;
  return (next.e_tot - prev.e_tot) / dt + d - interval_power_of(prev, next);
}

double relative_dissipation_residual(const LedgerEntry& prev, const LedgerEntry& next) {
  const double dt = next.t - prev.t;
  const double r = dissipation_residual(prev, next);
  const double d = std::isnan(next.dissipation) ? 0.0 : next.dissipation;
  const double scale = std::max({std::abs(interval_power_of(prev, next)), d, std::abs(next.e_tot - prev.e_tot) / dt,
                                 1e-9 * std::max(std::abs(prev.e_tot), std::abs(next.e_tot)) / dt});
  if (scale == 0.0) return r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(r) / scale;
}

void EnergyLedger::append(LedgerEntry entry) {
  if (entry.e_s < 0.0) throw std::invalid_argument("ledger: negative surface energy");
  if (entry.dissipation < 0.0) throw std::invalid_argument("ledger: negative dissipation");
  entry.e_tot = entry.e_el + entry.e_s;
  if (!entries_.empty()) {
    const auto& prev = entries_.back();
    if (!(entry.t > prev.t)) throw std::invalid_argument("ledger: time must increase");
    entry.residual = dissipation_residual(prev, entry);
    entry.rel_residual = relative_dissipation_residual(prev, entry);
  }
  entries_.push_back(entry);
}

double EnergyLedger::max_abs_residual() const noexcept {
  double m = 0.0;
  for (std::size_t i = 1; i < entries_.size(); ++i) m = std::max(m, std::abs(entries_[i].residual));
  return m;
}

double EnergyLedger::max_rel_residual() const noexcept {
  double m = 0.0;
  for (std::size_t i = 1; i < entries_.size(); ++i) m = std::max(m, entries_[i].rel_residual);
  return m;
}

double EnergyLedger::integrated_abs_residual() const noexcept {
  double s = 0.0;
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    s += std::abs(entries_[i].residual) * (entries_[i].t - entries_[i - 1].t);
  }
  return s;
}

void EnergyLedger::write_csv(std::ostream& os) const {
  os << std::setprecision(kDigits);
  os << "step,t,E_el,E_s,E_tot,Fdot,P,D,residual,rel_residual\n";
  for (const auto& e : entries_) {
    os << e.step << ',' << e.t << ',' << e.e_el << ',' << e.e_s << ',' << e.e_tot << ',' << e.fdot << ',' << e.power
       << ',' << e.dissipation << ',' << e.residual << ',' << e.rel_residual << '\n';
  }
}

double dissipation_rate(const TriMesh& mesh, const NodalField& z_prev, const NodalField& z_next, double dt,
                        const RateLaw& law) {
  check_field(mesh, z_prev, 1);
  check_field(mesh, z_next, 1);
  if (!(dt > 0.0)) throw DomainError("dissipation rate requires dt > 0");
  const auto mass = lumped_mass(mesh);
  double d = 0.0;
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const double v = (z_next.values[i] - z_prev.values[i]) / dt;
    if (v < 0.0) throw DomainError("dissipation rate: damage decreased at a node");
    if (v > 0.0) d += mass[i] * law.alpha_star(v) * v;
  }
  return d;
}

double friction_dissipation_rate(const TriMesh& mesh, const NodalField& u_prev, const NodalField& u_next, double dt,
                                 double alpha_u) {
  check_field(mesh, u_prev, 2);
  check_field(mesh, u_next, 2);
  const auto mass = lumped_mass(mesh);
  double d = 0.0;
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const double vx = (u_next.values[2 * i] - u_prev.values[2 * i]) / dt;
    const double vy = (u_next.values[2 * i + 1] - u_prev.values[2 * i + 1]) / dt;
    d += mass[i] * (vx * vx + vy * vy);
  }
  return alpha_u * d;
}

double interval_power(const TriMesh& mesh, const LoadState& a, const LoadState& b, const Eigen::VectorXd& reactions_a,
                      const Eigen::VectorXd& reactions_b, const NodalField& u_a, const NodalField& u_b) {
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) throw DomainError("interval power requires t_b > t_a");
  if (a.dirichlet_nodes != b.dirichlet_nodes || a.loaded_edges != b.loaded_edges) {
    throw std::invalid_argument("interval power: load states have different supports");
  }
  double work = 0.0;
  for (std::size_t k = 0; k < a.dirichlet_nodes.size(); ++k) {
    const auto n = static_cast<Eigen::Index>(a.dirichlet_nodes[k]);
    for (int c = 0; c < 2; ++c) {
      const double dg = b.dirichlet_values[2 * k + static_cast<std::size_t>(c)] - a.dirichlet_values[2 * k + static_cast<std::size_t>(c)];
      if (dg != 0.0) work += dg * 0.5 * (reactions_a[2 * n + c] + reactions_b[2 * n + c]);
    }
  }
  const auto mass = lumped_mass(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double df = b.body_force[2 * i + c] - a.body_force[2 * i + c];
      if (df != 0.0) work -= mass[i] * df * 0.5 * (u_a.values[2 * i + c] + u_b.values[2 * i + c]);
    }
  }
  for (std::size_t k = 0; k < a.loaded_edges.size(); ++k) {
    const auto& be = mesh.boundary_edges[static_cast<std::size_t>(a.loaded_edges[k])];
    const Point& p = mesh.nodes[static_cast<std::size_t>(be.nodes[0])];
    const Point& q = mesh.nodes[static_cast<std::size_t>(be.nodes[1])];
    const double half = 0.5 * std::hypot(q.x - p.x, q.y - p.y);
    for (std::size_t c = 0; c < 2; ++c) {
      const double dq = b.traction[2 * k + c] - a.traction[2 * k + c];
      if (dq == 0.0) continue;
      for (int n : be.nodes) {
        const auto nn = static_cast<std::size_t>(n);
        work -= half * dq * 0.5 * (u_a.values[2 * nn + c] + u_b.values[2 * nn + c]);
      }
    }
  }
  return work / dt;
}

// ---------------------------------------------------------------------------

double regularized_crack_increment(const TriMesh& mesh, const NodalField& z_now, const NodalField& z_ref,
                                   const MaterialParams& mat) {
  return (surface_energy(mesh, z_now, mat) - surface_energy(mesh, z_ref, mat)) / mat.g_c;
}

double beta_integral(const NodalField& z, const TriMesh& mesh) {
  const double inf = std::numeric_limits<double>::infinity();
  return beta_integral(z, mesh, -inf, inf);
}

double beta_integral(const NodalField& z, const TriMesh& mesh, double x_lo, double x_hi) {
  check_field(mesh, z, 1);
  double b = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    double xc = 0.0;
    for (int n : t) xc += mesh.nodes[static_cast<std::size_t>(n)].x;
    xc /= 3.0;
    if (xc < x_lo || xc > x_hi) continue;
    const auto g = element_geometry(mesh, e);
    double gx = 0.0;
    for (std::size_t i = 0; i < 3; ++i) gx += g.dx[i] * z.values[static_cast<std::size_t>(t[i])];
    b += g.area * gx * gx;
  }
  return b;
}

double crack_tip_position(const TriMesh& mesh, const NodalField& z, double line_y, double threshold) {
  check_field(mesh, z, 1);
  if (mesh.nx <= 0 || mesh.ny <= 0) throw std::invalid_argument("crack tip: structured mesh required");
  const long row = std::lround((line_y - mesh.origin.y) / mesh.hy);
  if (row < 0 || row > mesh.ny) throw std::invalid_argument("crack tip: line outside the mesh");
  const auto base = static_cast<std::size_t>(row) * static_cast<std::size_t>(mesh.nx + 1);
  const auto nx = static_cast<std::size_t>(mesh.nx);
  for (std::size_t k = nx + 1; k-- > 0;) {
    const double zk = z.values[base + k];
    if (zk < threshold) continue;
    const double xk = mesh.nodes[base + k].x;
    if (k == nx) return xk;
    const double zn = z.values[base + k + 1];
    return xk + (zk - threshold) / (zk - zn) * (mesh.nodes[base + k + 1].x - xk);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void write_strip_csv(std::ostream& os, const std::vector<StripSample>& samples) {
  os << std::setprecision(kDigits);
  os << "step,t,x_tip,L_eps,E_eps,beta\n";
  for (const auto& s : samples) {
    os << s.step << ',' << s.t << ',' << s.x_tip << ',' << s.l_eps << ',' << s.e_eps << ',' << s.beta << '\n';
  }
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least squares: need >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least squares: no spread in x");
  return sxy / sxx;
}

SteadyWindow find_steady_window(const std::vector<double>& t, const std::vector<double>& x_tip,
                                const SteadyWindowOptions& opts) {
  if (t.size() != x_tip.size()) throw std::invalid_argument("steady window: t and x_tip differ in length");
  SteadyWindow best;

  // Longest contiguous run of usable samples.
  std::size_t run_begin = 0, run_end = 0;
  for (std::size_t i = 0; i < t.size();) {
    auto ok = [&](std::size_t k) { return std::isfinite(x_tip[k]) && x_tip[k] >= opts.x_min && x_tip[k] <= opts.x_max; };
    if (!ok(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < t.size() && ok(j)) ++j;
    if (j - i > run_end - run_begin) {
      run_begin = i;
      run_end = j;
    }
    i = j;
  }
  const std::size_t n = run_end - run_begin;
  if (n < 2) return best;

  std::size_t stride = 1;
  const double advance = x_tip[run_end - 1] - x_tip[run_begin];
  if (opts.min_advance > 0.0 && advance > 0.0) {
    const double per_sample = advance / static_cast<double>(n - 1);
    stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opts.min_advance / per_sample - 1e-9)));
  }
  if (stride >= n) return best;

  std::vector<double> d(n - stride);
  double xscale = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = x_tip[run_begin + k + stride] - x_tip[run_begin + k];
    xscale = std::max(xscale, std::abs(x_tip[run_begin + k]));
  }
  const double flat = 1e-12 * (1.0 + xscale);
  const bool need_motion = opts.min_advance > 0.0;

  // Longest stretch of increments with (max - min) <= tol |mean|. A window of
  // m increments covers m + stride samples; at least 2 increments are needed
  // unless the whole run gives just one.
  std::size_t best_len = 0, best_first = 0;
  for (std::size_t a = 0; a < d.size(); ++a) {
    double lo = d[a], hi = d[a], sum = 0.0;
    for (std::size_t b = a; b < d.size(); ++b) {
      lo = std::min(lo, d[b]);
      hi = std::max(hi, d[b]);
      sum += d[b];
      const double mean = sum / static_cast<double>(b - a + 1);
      const double spread = hi - lo;
      // With a minimum advance the caller is after propagation, so flat
      // (stalled) stretches do not count.
      const bool steady = need_motion ? (mean > 0.0 && spread <= opts.tolerance * mean)
                                      : (spread <= opts.tolerance * std::abs(mean) || spread <= flat);
      if (!steady) break;
      if (b - a + 1 > best_len) {
        best_len = b - a + 1;
        best_first = a;
      }
    }
  }
  const std::size_t needed = d.size() >= 2 ? 2 : 1;
  if (best_len < needed) return best;
  best.found = true;
  best.stride = stride;
  best.begin = run_begin + best_first;
  best.end = best.begin + best_len + stride;
  return best;
}

double estimate_crack_velocity(const std::vector<double>& t, const std::vector<double>& x_tip,
                               const SteadyWindowOptions& opts) {
  const SteadyWindow w = find_steady_window(t, x_tip, opts);
  if (!w.found) throw NoSteadyWindowError("no steady window in the crack-tip history");
  std::vector<double> tt(t.begin() + static_cast<std::ptrdiff_t>(w.begin), t.begin() + static_cast<std::ptrdiff_t>(w.end));
  std::vector<double> xx(x_tip.begin() + static_cast<std::ptrdiff_t>(w.begin),
                         x_tip.begin() + static_cast<std::ptrdiff_t>(w.end));
  return least_squares_slope(tt, xx);
}

double effective_fracture_energy(double de_dt, double velocity) {
  if (!(velocity > 0.0)) throw DomainError("effective fracture energy requires V > 0");
  return -de_dt / velocity;
}

StripAnalysis analyze_strip(const std::vector<StripSample>& samples, const MaterialParams& mat,
                            const SteadyWindowOptions& opts) {
  StripAnalysis out;
  std::vector<double> t, x;
  t.reserve(samples.size());
  x.reserve(samples.size());
  for (const auto& s : samples) {
    t.push_back(s.t);
    x.push_back(s.x_tip);
  }
  out.window = find_steady_window(t, x, opts);
  if (!out.window.found) return out;

  std::vector<double> tw, xw, ew, lw;
  double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin, bsum = 0.0;
  for (std::size_t i = out.window.begin; i < out.window.end; ++i) {
    tw.push_back(samples[i].t);
    xw.push_back(samples[i].x_tip);
    ew.push_back(samples[i].e_eps);
    lw.push_back(samples[i].l_eps);
    bmin = std::min(bmin, samples[i].beta);
    bmax = std::max(bmax, samples[i].beta);
    bsum += samples[i].beta;
  }
  out.velocity = least_squares_slope(tw, xw);
  out.de_dt = least_squares_slope(tw, ew);
  out.dl_dt = least_squares_slope(tw, lw);
  out.beta_mean = bsum / static_cast<double>(tw.size());
  out.beta_spread = out.beta_mean > 0.0 ? (bmax - bmin) / out.beta_mean : 0.0;
  // A stalled tip gives a flat window with V at roundoff level; that is not
  // propagation.
  const double advance = xw.back() - xw.front();
  const double resolvable = std::max(opts.min_advance, 1e-9 * (1.0 + std::abs(xw.front())));
  if (out.velocity > 0.0 && advance >= resolvable) {
    out.steady = true;
    out.g_c_eps = effective_fracture_energy(out.de_dt, out.velocity);
    out.l_ratio = out.dl_dt / out.velocity;
    if (mat.rate_law.is_proportional()) {
      const double diss = mat.rate_law.proportional_coefficient() * out.beta_mean * out.velocity * out.velocity;
      out.identity_residual = (out.de_dt + mat.g_c * out.dl_dt + diss) / diss;
    }
  }
  return out;
}

}  // namespace vfrac
