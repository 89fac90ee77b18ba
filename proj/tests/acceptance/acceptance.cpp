// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vfrac/config.hpp"
#include "vfrac/core.hpp"
#include "vfrac/elasticity.hpp"
#include "vfrac/griffith.hpp"
#include "vfrac/mesh.hpp"
#include "vfrac/scenarios.hpp"

namespace fs = std::filesystem;
using namespace vfrac;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Report {
  int failures = 0;
  void line(int id, bool pass, const std::string& detail) {
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
    if (!pass) ++failures;
  }
};

// Violations accumulated over every phase-field run (criterion 8).
struct Violations {
  std::size_t runs = 0;
  std::size_t irreversibility = 0;
  std::size_t range = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

RateLaw random_law(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return RateLaw::linear(0.01 + 2.0 * u(rng));
    case 1:
      return RateLaw::power(0.01 + 2.0 * u(rng), 0.3 + 2.7 * u(rng));
    default: {
      std::vector<std::pair<double, double>> s{{0.0, 0.0}};
      double v = 0.0, a = 0.0;
      const int n = std::uniform_int_distribution<int>(1, 6)(rng);
      for (int i = 0; i < n; ++i) {
        v += 0.05 + u(rng);
        a += 0.05 + u(rng);
        s.emplace_back(v, a);
      }
      return RateLaw::tabulated(std::move(s));
    }
  }
}

double law_v_max(const RateLaw& law) {
  if (const auto* t = std::get_if<TabulatedRate>(&law.kind())) return t->samples.back().first;
  return 10.0;
}

void criterion1(Report& rep) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 5);
  std::size_t mismatches = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    double a = u(rng), b = u(rng);
    // Boundary cases get their own share: exact zeros and equal values.
    switch (pick(rng)) {
      case 0: a = 0.0; break;
      case 1: b = 0.0; break;
      case 2: a = b = 0.0; break;
      case 3: b = a; break;
      default: break;
    }
    const bool triple = a >= 0.0 && b >= 0.0 && a * b == 0.0;
    if (check_complementarity(a, b, 0.0) != triple) ++mismatches;
  }
  const double secs = seconds_since(t0);
  rep.line(1, mismatches == 0 && secs < 1.0,
           std::to_string(n) + " pairs, mismatches " + std::to_string(mismatches) + ", " + fmt(secs) + " s");
}

void criterion2(Report& rep) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 10000;
  std::size_t solutions_failed = 0, violators_passed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const RateLaw law = random_law(rng);
    const double gc = 0.1 + 2.9 * u(rng);
    const double g = (gc + law.alpha_star(0.9 * law_v_max(law))) * u(rng);
    const double v = law.beta_star(g - gc);
    if (!kkt_check(v, g, gc, law, 1e-10)) ++solutions_failed;

    double bad_v = v, bad_g = g;
    switch (i % 3) {
      case 0:
        bad_v = -(1e-6 + u(rng));
        break;
      case 1:
        bad_g = gc + law.alpha_star(v) + 1e-6 + u(rng);
        break;
      default:
        bad_v = v + (0.02 + 0.08 * u(rng)) * law_v_max(law);
        break;
    }
    if (kkt_check(bad_v, bad_g, gc, law, 1e-10)) ++violators_passed;
  }
  const double secs = seconds_since(t0);
  rep.line(2, solutions_failed == 0 && violators_passed == 0 && secs < 5.0,
           std::to_string(n) + " solutions (" + std::to_string(solutions_failed) + " rejected), " + std::to_string(n) +
               " violators (" + std::to_string(violators_passed) + " accepted), " + fmt(secs) + " s");
}

void criterion3(Report& rep, const std::string& out) {
  const auto t0 = Clock::now();
  Figure3Config cfg;
  cfg.alphas = {0.01, 0.05, 0.1, 0.2};
  cfg.dt = 1e-5;
  const Figure3Result r = run_figure3(cfg);
  const double secs = seconds_since(t0);
  if (!out.empty()) write_figure3((fs::path(out) / "figure3").string(), cfg, r);

  bool monotone = true, ordered = true;
  for (std::size_t k = 0; k < r.trajectories.size(); ++k) {
    const auto& tr = r.trajectories[k];
    for (std::size_t i = 1; i < tr.size(); ++i) monotone = monotone && tr.length[i] >= tr.length[i - 1];
    if (k == 0) continue;
    const auto& prev = r.trajectories[k - 1];  // smaller alpha
    for (std::size_t i = 0; i < tr.size(); ++i) ordered = ordered && prev.length[i] >= tr.length[i];
  }

  // Fractions listed from alpha = 0.2 down to 0.01.
  std::vector<double> frac;
  for (std::size_t k = r.alphas.size(); k-- > 0;) frac.push_back(growth_fraction(r.trajectories[k], 0.95, 1.05));
  bool increasing = true;
  for (std::size_t k = 1; k < frac.size(); ++k) increasing = increasing && frac[k] > frac[k - 1];
  const bool sharp = frac.back() >= 0.6;

  std::string fr;
  for (std::size_t k = 0; k < frac.size(); ++k) {
    fr += (k ? ", " : "") + fmt(r.alphas[r.alphas.size() - 1 - k]) + ":" + fmt(frac[k]);
  }
  rep.line(3, monotone && ordered && sharp && increasing && secs < 10.0,
           std::string("(a) monotone ") + (monotone ? "yes" : "no") + ", (b) ordered " + (ordered ? "yes" : "no") +
               ", (c) jump fraction {" + fr + "}, >= 0.6 at 0.01 " + (sharp ? "yes" : "no") + ", increasing " +
               (increasing ? "yes" : "no") + ", " + fmt(secs) + " s");
}

void criterion4(Report& rep) {
  const auto t0 = Clock::now();
  const EnergyProfile p = figure3_energy_profile();
  const RateLaw law = RateLaw::linear(0.05);
  const double coarse = ode_dissipation_check(integrate_crack_length(p, 1.0, law, 0.0, 0.0, 1.2, 1e-3), p);
  const double fine = ode_dissipation_check(integrate_crack_length(p, 1.0, law, 0.0, 0.0, 1.2, 1e-4), p);
  const double secs = seconds_since(t0);
  const double ratio = coarse / fine;
  rep.line(4, ratio >= 8.0 && secs < 30.0,
           "max residual " + fmt(coarse) + " -> " + fmt(fine) + ", ratio " + fmt(ratio) + ", " + fmt(secs) + " s");
}

void criterion5(Report& rep, Violations& viol, const std::string& configs, const std::string& out) {
  const auto t0 = Clock::now();
  ScenarioConfig cfg = load_scenario_config((fs::path(configs) / "strip_fpfm.json").string());
  cfg.output.vtk_every = 0;
  const double dts[] = {cfg.time.dt, 0.5 * cfg.time.dt};
  bool per_step = true;
  std::vector<double> integrated;
  std::string detail;
  for (double dt : dts) {
    cfg.time.dt = dt;
    const std::string dir = out.empty() ? "" : (fs::path(out) / ("strip_dt_" + fmt(dt))).string();
    const FpfmResult r = run_fpfm(cfg, dir);
    ++viol.runs;
    viol.irreversibility += r.irreversibility_violations;
    viol.range += r.range_violations;
    const double max_rel = r.ledger.max_rel_residual();
    per_step = per_step && r.status == RunStatus::ok && max_rel <= 0.05;
    integrated.push_back(r.ledger.integrated_abs_residual());
    detail += "dt " + fmt(dt) + ": " + std::string(to_string(r.status)) + ", max rel " + fmt(max_rel) +
              ", integrated " + fmt(integrated.back()) + "; ";
  }
  const double secs = seconds_since(t0);
  const bool shrinks = integrated[1] < integrated[0];
  rep.line(5, per_step && shrinks && secs < 300.0, detail + fmt(secs) + " s");
}

void criterion6(Report& rep, Violations& viol, const std::string& configs, const std::string& out) {
  const auto t0 = Clock::now();
  const TravelWaveConfig cfg = load_travelwave_config((fs::path(configs) / "travelwave.json").string());
  const TravelWaveResult r = run_traveling_wave(cfg, out.empty() ? "" : (fs::path(out) / "travelwave").string());
  const double secs = seconds_since(t0);
  for (const auto& row : r.rows) {
    ++viol.runs;
    viol.irreversibility += row.irreversibility_violations;
    viol.range += row.range_violations;
  }
  const auto fits = sweep_fits(r);
  bool pass = !fits.empty() && secs < 1800.0;
  std::string detail;
  for (const auto& f : fits) {
    const double target = f.alpha * f.beta_mean;
    const bool ok = f.points >= 4 && std::abs(f.fit.intercept - cfg.material.g_c) <= 0.15 * cfg.material.g_c &&
                    std::abs(f.fit.slope - target) <= 0.25 * target;
    pass = pass && ok;
    detail += "alpha " + fmt(f.alpha) + ": " + std::to_string(f.points) + " steady, intercept " +
              fmt(f.fit.intercept) + " (G_c " + fmt(cfg.material.g_c) + "), slope " + fmt(f.fit.slope) +
              " (alpha*beta " + fmt(target) + "); ";
  }
  rep.line(6, pass, detail + fmt(secs) + " s");
}

// Total potential energy at the elastic minimizer.
double minimal_energy(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat, const LoadState& loads) {
  const NodalField u = solve_displacement(mesh, z, mat, loads, 1e-12);
  return elastic_energy(mesh, u, z, mat, loads);
}

void criterion7(Report& rep) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MaterialParams mat;
  mat.lame_lambda = 1.5;
  mat.lame_mu = 0.8;
  const TriMesh mesh = build_rect_mesh(1.0, 1.0, 0.05, TagRule{BoundaryTag::dirichlet, BoundaryTag::neumann_free,
                                                               BoundaryTag::neumann_loaded, BoundaryTag::neumann_free});
  // Clamped bottom, pulled top: a displacement-free traction load and a stretch.
  LoadProgram traction;
  traction.traction_profile = TimeProfile::constant(1.0);
  traction.traction = {0.2, 1.0};
  LoadProgram stretch;
  stretch.dirichlet_profile = TimeProfile::constant(1.0);
  stretch.dirichlet_gradient = {0.1, 0.0, 0.0, -0.05};
  stretch.body_force_profile = TimeProfile::constant(1.0);
  stretch.body_force = {0.0, -0.5};

  std::size_t failures = 0;
  double worst = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    NodalField z = NodalField::scalar(mesh.node_count());
    NodalField zt = z;
    const double cx = u(rng), cy = u(rng), r = 0.1 + 0.3 * u(rng);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      const double d = std::hypot(mesh.nodes[i].x - cx, mesh.nodes[i].y - cy);
      z(i) = 0.6 * u(rng) * std::exp(-d * d / (r * r));
      zt(i) = z(i) + (1.0 - z(i)) * u(rng) * (trial % 2 ? 1.0 : 0.3);
    }
    const LoadState loads = make_load_state(mesh, trial % 2 ? traction : stretch, 0.0);
    const double e = minimal_energy(mesh, z, mat, loads), et = minimal_energy(mesh, zt, mat, loads);
    worst = std::max(worst, et - e);
    if (!(e >= et - 1e-10)) ++failures;
  }
  const double secs = seconds_since(t0);
  rep.line(7, failures == 0 && secs < 60.0,
           "20 nested pairs, violations " + std::to_string(failures) + ", max E(z~) - E(z) " + fmt(worst) + ", " +
               fmt(secs) + " s");
}

void criterion8(Report& rep, const Violations& viol) {
  rep.line(8, viol.runs > 0 && viol.irreversibility == 0 && viol.range == 0,
           std::to_string(viol.runs) + " runs, irreversibility violations " + std::to_string(viol.irreversibility) +
               ", range violations " + std::to_string(viol.range));
}

void criterion9(Report& rep) {
  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_disp = 0.0, worst_energy = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    MaterialParams mat;
    mat.lame_lambda = 1.0 + u(rng) * 0.5;
    mat.lame_mu = 1.0 + u(rng) * 0.5;
    mat.plane_mode = trial % 2 ? PlaneMode::plane_stress : PlaneMode::plane_strain;
    const TriMesh mesh = build_rect_mesh(2.0, 1.0, 0.1, TagRule::all(BoundaryTag::dirichlet), {u(rng), u(rng)});
    LoadProgram p;
    p.dirichlet_profile = TimeProfile::constant(1.0);
    p.dirichlet_gradient = {u(rng), u(rng), u(rng), u(rng)};
    p.dirichlet_offset = {u(rng), u(rng)};
    const auto& a = p.dirichlet_gradient;
    const double zc = trial < 5 ? 0.0 : 0.5 * (1.0 + u(rng));
    const NodalField z = NodalField::scalar(mesh.node_count(), zc);
    const LoadState loads = make_load_state(mesh, p, 0.0);
    const NodalField sol = solve_displacement(mesh, z, mat, loads, 1e-14);

    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      const Point x = mesh.nodes[i];
      const double ex = a[0] * x.x + a[1] * x.y + p.dirichlet_offset.x;
      const double ey = a[2] * x.x + a[3] * x.y + p.dirichlet_offset.y;
      err = std::max({err, std::abs(sol(i, 0) - ex), std::abs(sol(i, 1) - ey)});
      scale = std::max({scale, std::abs(ex), std::abs(ey)});
    }
    worst_disp = std::max(worst_disp, err / scale);

    // W = (1/2) g(z) (lambda~ tr(e)^2 + 2 mu e:e) |Omega| for the constant strain e = sym(A).
    const double exx = a[0], eyy = a[3], exy = 0.5 * (a[1] + a[2]);
    const double density = mat.effective_lambda() * (exx + eyy) * (exx + eyy) +
                           2.0 * mat.lame_mu * (exx * exx + eyy * eyy + 2.0 * exy * exy);
    const double degradation = (1.0 - zc) * (1.0 - zc) + mat.residual_stiffness;
    const double oracle = 0.5 * degradation * density * 2.0;
    worst_energy = std::max(worst_energy, std::abs(elastic_energy(mesh, sol, z, mat, loads) - oracle) / oracle);
    const ElementField w = energy_density(mesh, sol, mat);
    for (double we : w) worst_energy = std::max(worst_energy, std::abs(we - density) / density);
  }
  rep.line(9, worst_disp <= 1e-12 && worst_energy <= 1e-10,
           "affine data max rel displacement error " + fmt(worst_disp) + ", max rel energy error " +
               fmt(worst_energy));
}

}  // namespace

int main(int argc, char** argv) {
  std::string out, configs = VFRAC_CONFIG_DIR;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--out" || arg == "--configs") && i + 1 < argc) {
      (arg == "--out" ? out : configs) = argv[++i];
    } else {
      std::cerr << "usage: vfrac_acceptance [--out DIR] [--configs DIR]\n";
      return 2;
    }
  }
  if (!out.empty()) fs::create_directories(out);

  Report rep;
  Violations viol;
  try {
    criterion1(rep);
    criterion2(rep);
    criterion3(rep, out);
    criterion4(rep);
    criterion5(rep, viol, configs, out);
    criterion6(rep, viol, configs, out);
    criterion7(rep);
    criterion8(rep, viol);
    criterion9(rep);
  } catch (const std::exception& e) {
    std::cout << "aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (rep.failures == 0 ? "all criteria passed" : std::to_string(rep.failures) + " criteria failed")
            << std::endl;
  return rep.failures == 0 ? 0 : 1;
}
