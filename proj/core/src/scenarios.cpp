#include "vfrac/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "vfrac/error.hpp"
#include "vfrac/phasefield.hpp"
#include "vfrac/vtk.hpp"

namespace vfrac {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

// Rate of external work at one instant, with precomputed reactions.
double instant_power(const TriMesh& mesh, const std::vector<double>& mass, const LoadState& loads,
                     const Eigen::VectorXd& reactions, const NodalField& u) {
  double p = 0.0;
  for (std::size_t k = 0; k < loads.dirichlet_nodes.size(); ++k) {
    const auto n = static_cast<Eigen::Index>(loads.dirichlet_nodes[k]);
    p += loads.dirichlet_rates[2 * k] * reactions[2 * n] + loads.dirichlet_rates[2 * k + 1] * reactions[2 * n + 1];
  }
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    p -= mass[i] * (loads.body_force_rates[2 * i] * u.values[2 * i] + loads.body_force_rates[2 * i + 1] * u.values[2 * i + 1]);
  }
  for (std::size_t k = 0; k < loads.loaded_edges.size(); ++k) {
    const auto& be = mesh.boundary_edges[static_cast<std::size_t>(loads.loaded_edges[k])];
    const Point& a = mesh.nodes[static_cast<std::size_t>(be.nodes[0])];
    const Point& b = mesh.nodes[static_cast<std::size_t>(be.nodes[1])];
    const double half = 0.5 * std::hypot(b.x - a.x, b.y - a.y);
    for (int n : be.nodes) {
      const auto nn = static_cast<std::size_t>(n);
      p -= half * (loads.traction_rates[2 * k] * u.values[2 * nn] + loads.traction_rates[2 * k + 1] * u.values[2 * nn + 1]);
    }
  }
  return p;
}

double crack_line(const ScenarioConfig& cfg) {
  return std::isnan(cfg.output.crack_line_y) ? cfg.mesh.origin.y + 0.5 * cfg.mesh.height : cfg.output.crack_line_y;
}

double end_margin(const ScenarioConfig& cfg) {
  return std::isnan(cfg.output.end_margin) ? cfg.mesh.height : cfg.output.end_margin;
}

SteadyWindowOptions window_options(const ScenarioConfig& cfg) {
  SteadyWindowOptions o;
  o.tolerance = cfg.output.steady_tolerance;
  o.x_min = cfg.mesh.origin.x + end_margin(cfg);
  o.x_max = cfg.mesh.origin.x + cfg.mesh.width - end_margin(cfg);
  o.min_advance = 2.0 * cfg.mesh.h;
  return o;
}

void write_vtk_snapshot(const fs::path& dir, std::size_t step, const TriMesh& mesh, const NodalField& u,
                        const NodalField& z, const MaterialParams& mat) {
  char name[32];
  std::snprintf(name, sizeof name, "step_%06zu.vtk", step);
  write_vtk_file((dir / name).string(), mesh, {{"z", 1, z.values}, {"u", 2, u.values}},
                 {{"w", 1, energy_density(mesh, u, mat)}}, "vfrac step " + std::to_string(step));
}

json nan_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

NodalField initial_damage_field(const TriMesh& mesh, const InitialDamage& spec, double epsilon) {
  NodalField z = NodalField::scalar(mesh.node_count());
  switch (spec.kind) {
    case InitialDamage::Kind::zero: break;
    case InitialDamage::Kind::constant: std::fill(z.values.begin(), z.values.end(), spec.value); break;
    case InitialDamage::Kind::seed_crack:
      for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        z.values[i] = std::exp(-segment_distance(mesh.nodes[i], spec.from, spec.to) / epsilon);
      }
      break;
  }
  const auto pinned = damage_pinned_nodes(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (pinned[i]) z.values[i] = 0.0;
  }
  return z;
}

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::ok: return "OK";
    case RunStatus::failed_identity: return "FAILED-IDENTITY";
    case RunStatus::solver_failure: return "SOLVER-FAILURE";
  }
  return "OK";
}

FpfmResult run_fpfm(const ScenarioConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const auto wall_start = std::chrono::steady_clock::now();
  FpfmResult res;
  res.mesh = build_rect_mesh(cfg.mesh.width, cfg.mesh.height, cfg.mesh.h, cfg.mesh.tags, cfg.mesh.origin);
  const TriMesh& mesh = res.mesh;
  validate_mesh(mesh);
  const MaterialParams& mat = cfg.material;
  const auto mass = lumped_mass(mesh);
  const bool relaxed = mat.friction_alpha_u > 0.0;
  const bool trapezoidal = cfg.solver.time_scheme == TimeScheme::trapezoidal;
  const double dt = cfg.time.dt;
  const std::size_t steps = cfg.time.steps();
  const double line_y = crack_line(cfg);

  fs::path dir;
  fs::path vtk_dir;
  if (!out_dir.empty()) {
    dir = out_dir;
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << to_json(cfg) << '\n';
    if (cfg.output.vtk_every > 0) {
      vtk_dir = dir / "vtk";
      fs::create_directories(vtk_dir);
    }
  }

  LoadState loads = make_load_state(mesh, cfg.loads, cfg.time.t0);
  DisplacementSolver disp(mesh, mat, loads.dirichlet_nodes, cfg.solver.residual_tolerance);
  PhaseFieldSolver pf(mesh, mat);

  NodalField z = initial_damage_field(mesh, cfg.initial_damage, mat.epsilon);
  const NodalField z_ref = z;
  NodalField u;
  Eigen::VectorXd reac;

  auto record = [&](std::size_t step, double t, double power, double dissipation) {
    LedgerEntry e;
    e.step = step;
    e.t = t;
    e.e_el = elastic_energy(mesh, u, z, mat, loads);
    e.e_s = surface_energy(mesh, z, mat);
    e.fdot = instant_power(mesh, mass, loads, reac, u);
    e.power = power;
    e.dissipation = dissipation;
    res.ledger.append(e);
    if (cfg.output.strip_diagnostics) {
      StripSample s;
      s.step = step;
      s.t = t;
      s.x_tip = crack_tip_position(mesh, z, line_y, cfg.output.tip_threshold);
      s.l_eps = regularized_crack_increment(mesh, z, z_ref, mat);
      s.e_eps = e.e_el;
      const double half = std::isnan(cfg.output.beta_window) ? 0.5 * cfg.mesh.height : cfg.output.beta_window;
      s.beta = std::isfinite(s.x_tip) ? beta_integral(z, mesh, s.x_tip - half, s.x_tip + half) : beta_integral(z, mesh);
      res.strip.push_back(s);
    }
    if (!vtk_dir.empty() && step % static_cast<std::size_t>(cfg.output.vtk_every) == 0) {
      write_vtk_snapshot(vtk_dir, step, mesh, u, z, mat);
    }
  };

  try {
    u = disp.solve(z, loads);
    reac = disp.reactions(u, z, loads);
    record(0, cfg.time.t0, LedgerEntry::nan, LedgerEntry::nan);

    for (std::size_t n = 0; n < steps; ++n) {
      const ElementField w = energy_density(mesh, u, mat);
      const double t_next = cfg.time.t0 + static_cast<double>(n + 1) * dt;
      LoadState loads_next = make_load_state(mesh, cfg.loads, t_next);
      PhaseFieldStepInfo info;
      NodalField z_new = pf.step(z, w, dt, &info);
      NodalField u_new;
      if (trapezoidal) {
        int pass = 0;
        double change = std::numeric_limits<double>::infinity();
        while (pass < cfg.solver.corrector_passes && change > cfg.solver.corrector_tolerance) {
          u_new = disp.solve(z_new, loads_next);
          NodalField z_next = pf.step_trapezoidal(z, w, energy_density(mesh, u_new, mat), dt, &info);
          change = 0.0;
          for (std::size_t i = 0; i < mesh.node_count(); ++i) {
            change = std::max(change, std::abs(z_next.values[i] - z_new.values[i]));
          }
          z_new = std::move(z_next);
          ++pass;
        }
        res.corrector_passes += static_cast<std::size_t>(pass);
        if (change > cfg.solver.corrector_tolerance) ++res.unconverged_correctors;
      }
      if (!info.stability_ok) {
        if (cfg.solver.stability_warnings && res.stability_warnings == 0) {
          std::cerr << "warning: dt = " << dt << " exceeds the stability guideline " << info.stable_dt << " at step "
                    << n + 1 << " (further warnings counted in the summary)\n";
        }
        ++res.stability_warnings;
      }
      for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        if (z_new.values[i] < z.values[i]) ++res.irreversibility_violations;
        if (!(z_new.values[i] >= 0.0 && z_new.values[i] <= 1.0)) ++res.range_violations;
      }

      u_new = relaxed ? disp.relaxed_step(u, dt, z_new, loads_next) : disp.solve(z_new, loads_next);
      Eigen::VectorXd reac_next = disp.reactions(u_new, z_new, loads_next);

      const double power = interval_power(mesh, loads, loads_next, reac, reac_next, u, u_new);
      double dissipation = dissipation_rate(mesh, z, z_new, dt, mat.rate_law);
      if (relaxed) dissipation += friction_dissipation_rate(mesh, u, u_new, dt, mat.friction_alpha_u);

      z = std::move(z_new);
      u = std::move(u_new);
      reac = std::move(reac_next);
      loads = std::move(loads_next);
      record(n + 1, t_next, power, dissipation);
      res.steps = n + 1;

      if (std::isfinite(cfg.solver.stop_tip_x) && cfg.output.strip_diagnostics) {
        const double tip = res.strip.back().x_tip;
        if (std::isfinite(tip) && tip >= cfg.solver.stop_tip_x) {
          res.stopped_at_tip = true;
          break;
        }
      }
    }
  } catch (const SolverError& e) {
    res.status = RunStatus::solver_failure;
    res.message = e.what();
  }

  res.u = u;
  res.z = z;
  if (cfg.output.strip_diagnostics) res.analysis = analyze_strip(res.strip, mat, window_options(cfg));
  if (res.status == RunStatus::ok && res.ledger.max_rel_residual() > cfg.output.dissipation_tolerance) {
    res.status = RunStatus::failed_identity;
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  if (!dir.empty()) {
    {
      std::ofstream os(dir / "ledger.csv");
      res.ledger.write_csv(os);
    }
    if (cfg.output.strip_diagnostics) {
      std::ofstream os(dir / "strip.csv");
      write_strip_csv(os, res.strip);
    }
    if (!vtk_dir.empty() && !u.values.empty() && res.steps % static_cast<std::size_t>(cfg.output.vtk_every) != 0) {
      write_vtk_snapshot(vtk_dir, res.steps, mesh, u, z, mat);
    }
    write_summary((dir / "summary.json").string(), cfg, res);
  }
  return res;
}

void write_summary(const std::string& path, const ScenarioConfig& cfg, const FpfmResult& r) {
  json j;
  j["name"] = cfg.name;
  j["status"] = std::string(to_string(r.status));
  j["message"] = r.message;
  j["steps"] = r.steps;
  j["nodes"] = r.mesh.node_count();
  j["triangles"] = r.mesh.triangle_count();
  if (!r.ledger.empty()) {
    const auto& last = r.ledger.entries().back();
    j["t_final"] = last.t;
    j["E_el"] = last.e_el;
    j["E_s"] = last.e_s;
    j["E_tot"] = last.e_tot;
  }
  j["max_abs_residual"] = r.ledger.max_abs_residual();
  j["max_rel_residual"] = r.ledger.max_rel_residual();
  j["integrated_abs_residual"] = r.ledger.integrated_abs_residual();
  j["dissipation_tolerance"] = cfg.output.dissipation_tolerance;
  j["irreversibility_violations"] = r.irreversibility_violations;
  j["range_violations"] = r.range_violations;
  j["stability_warnings"] = r.stability_warnings;
  j["corrector_passes"] = r.corrector_passes;
  j["unconverged_correctors"] = r.unconverged_correctors;
  j["stopped_at_tip"] = r.stopped_at_tip;
  j["wall_seconds"] = r.wall_seconds;
  if (cfg.output.strip_diagnostics) {
    const auto& a = r.analysis;
    j["strip"] = {{"steady", a.steady},
                  {"window_begin_step", a.window.found ? json(a.window.begin) : json(nullptr)},
                  {"window_end_step", a.window.found ? json(a.window.end) : json(nullptr)},
                  {"velocity", nan_null(a.velocity)},
                  {"dE_dt", nan_null(a.de_dt)},
                  {"dL_dt", nan_null(a.dl_dt)},
                  {"beta_mean", nan_null(a.beta_mean)},
                  {"beta_spread", nan_null(a.beta_spread)},
                  {"G_c_eps", nan_null(a.g_c_eps)},
                  {"L_ratio", nan_null(a.l_ratio)},
                  {"identity_residual", nan_null(a.identity_residual)}};
  }
  std::ofstream os(path);
  os << std::setprecision(kDigits) << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

Figure3Result run_figure3(const Figure3Config& cfg) {
  cfg.validate();
  Figure3Result out;
  out.alphas = cfg.alphas;
  std::sort(out.alphas.begin(), out.alphas.end());
  const EnergyProfile profile = figure3_energy_profile(cfg.l0);
  for (double a : out.alphas) {
    auto traj = integrate_crack_length(profile, cfg.g_c, RateLaw::linear(a), cfg.l0, cfg.t0, cfg.t1, cfg.dt);
    out.max_residuals.push_back(ode_dissipation_check(traj, profile));
    out.trajectories.push_back(std::move(traj));
  }
  return out;
}

namespace {
// Shortest decimal form that round-trips, for column and file names.
std::string alpha_label(double a) {
  for (int digits = 1; digits < kDigits; ++digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << a;
    if (std::stod(os.str()) == a) return os.str();
  }
  std::ostringstream os;
  os << std::setprecision(kDigits) << a;
  return os.str();
}
}  // namespace

void write_figure3(const std::string& out_dir, const Figure3Config& cfg, const Figure3Result& r) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "figure3.csv");
    os << std::setprecision(kDigits) << 't';
    for (double a : r.alphas) os << ",L_" << alpha_label(a);
    os << '\n';
    std::size_t rows = 0;
    for (const auto& tr : r.trajectories) rows = std::max(rows, tr.size());
    for (std::size_t i = 0; i < rows; ++i) {
      double t = 0.0;
      for (const auto& tr : r.trajectories) {
        if (i < tr.size()) t = tr.t[i];
      }
      os << t;
      for (const auto& tr : r.trajectories) {
        os << ',';
        if (i < tr.size()) os << tr.length[i];
      }
      os << '\n';
    }
  }
  const EnergyProfile profile = figure3_energy_profile(cfg.l0);
  for (std::size_t k = 0; k < r.alphas.size(); ++k) {
    std::ostringstream name;
    name << "trajectory_alpha_" << alpha_label(r.alphas[k]) << ".csv";
    std::ofstream os(dir / name.str());
    write_trajectory_csv(os, r.trajectories[k], ode_dissipation_residuals(r.trajectories[k], profile));
  }
  json j;
  j["config"] = json::parse(to_json(cfg));
  json runs = json::array();
  for (std::size_t k = 0; k < r.alphas.size(); ++k) {
    const auto& tr = r.trajectories[k];
    json run = {{"alpha", r.alphas[k]},
                {"status", std::string(to_string(tr.status))},
                {"L_final", tr.length.back()},
                {"max_dissipation_residual", r.max_residuals[k]}};
    try {
      run["jump_fraction"] = growth_fraction(tr, 0.95, 1.05);
    } catch (const std::out_of_range&) {
      run["jump_fraction"] = nullptr;
    }
    runs.push_back(run);
  }
  j["runs"] = runs;
  std::ofstream os(dir / "figure3_summary.json");
  os << std::setprecision(kDigits) << j.dump(2) << '\n';
}

double length_at(const CrackTrajectory& traj, double t) {
  if (traj.size() == 0 || t < traj.t.front() || t > traj.t.back()) throw std::out_of_range("length_at: t outside trajectory");
  const auto it = std::lower_bound(traj.t.begin(), traj.t.end(), t);
  const auto k = static_cast<std::size_t>(it - traj.t.begin());
  if (k == 0 || traj.t[k] == t) return traj.length[k];
  const double s = (t - traj.t[k - 1]) / (traj.t[k] - traj.t[k - 1]);
  return traj.length[k - 1] + s * (traj.length[k] - traj.length[k - 1]);
}

double growth_fraction(const CrackTrajectory& traj, double ta, double tb) {
  const double total = traj.length.back() - traj.length.front();
  if (!(total > 0.0)) return 0.0;
  return (length_at(traj, tb) - length_at(traj, ta)) / total;
}

// ---------------------------------------------------------------------------

ScenarioConfig strip_scenario(const TravelWaveConfig& tw, double amplitude, double alpha) {
  ScenarioConfig c;
  const auto& s = tw.strip;
  char name[96];
  std::snprintf(name, sizeof name, "%s_a%.6g_alpha%.6g", tw.name.c_str(), amplitude, alpha);
  c.name = name;
  c.mesh.width = s.width;
  c.mesh.height = 2.0 * s.half_height;
  c.mesh.h = s.h;
  c.mesh.origin = {0.0, -s.half_height};
  c.mesh.tags.top = BoundaryTag::dirichlet;
  c.mesh.tags.bottom = BoundaryTag::dirichlet;
  c.material = tw.material;
  c.material.rate_law = RateLaw::linear(alpha);
  c.loads = LoadProgram::strip_shear(amplitude, s.half_height, tw.t_ramp);
  c.time = tw.time;
  c.initial_damage.kind = InitialDamage::Kind::seed_crack;
  c.initial_damage.from = {0.0, 0.0};
  c.initial_damage.to = {s.seed_length, 0.0};
  c.output = tw.output;
  c.output.strip_diagnostics = true;
  c.output.crack_line_y = 0.0;
  c.solver = tw.solver;
  if (std::isnan(c.solver.stop_tip_x)) c.solver.stop_tip_x = s.width - end_margin(c);
  return c;
}

TravelWaveResult run_traveling_wave(const TravelWaveConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  struct Job {
    double a, alpha;
  };
  std::vector<Job> jobs;
  for (double a : cfg.amplitudes) {
    for (double al : cfg.alphas) jobs.push_back({a, al});
  }
  TravelWaveResult out;
  out.rows.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const ScenarioConfig sc = strip_scenario(cfg, jobs[i].a, jobs[i].alpha);
      std::string run_dir;
      if (!out_dir.empty()) run_dir = (fs::path(out_dir) / ("run_" + std::to_string(i))).string();
      const FpfmResult r = run_fpfm(sc, run_dir);
      TravelWaveRow row;
      row.amplitude = jobs[i].a;
      row.alpha = jobs[i].alpha;
      row.status = r.status;
      row.steady = r.analysis.steady;
      row.velocity = r.analysis.velocity;
      row.g_c_eps = r.analysis.g_c_eps;
      row.beta = r.analysis.beta_mean;
      row.l_ratio = r.analysis.l_ratio;
      row.identity_residual = r.analysis.identity_residual;
      row.max_rel_residual = r.ledger.max_rel_residual();
      row.irreversibility_violations = r.irreversibility_violations;
      row.range_violations = r.range_violations;
      row.wall_seconds = r.wall_seconds;
      out.rows[i] = row;
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cerr << "travelwave: a = " << row.amplitude << ", alpha = " << row.alpha << ": " << to_string(row.status)
                << (row.steady ? ", steady" : ", no steady window") << ", V = " << row.velocity << '\n';
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(cfg.workers > 0 ? static_cast<std::size_t>(cfg.workers) : hw, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_workers; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  if (!out_dir.empty()) {
    std::ofstream os(fs::path(out_dir) / "table.csv");
    write_travelwave_table(os, out);
    std::ofstream(fs::path(out_dir) / "config.json") << to_json(cfg) << '\n';
    // Timings stay out of table.csv so that it is reproducible bit for bit.
    json timing = json::array();
    for (const auto& row : out.rows) {
      timing.push_back({{"amplitude", row.amplitude}, {"alpha", row.alpha}, {"wall_seconds", row.wall_seconds}});
    }
    std::ofstream(fs::path(out_dir) / "timing.json") << timing.dump(2) << '\n';
    json fits = json::array();
    for (const auto& f : sweep_fits(out)) {
      fits.push_back({{"alpha", f.alpha},
                      {"points", f.points},
                      {"intercept", nan_null(f.fit.intercept)},
                      {"slope", nan_null(f.fit.slope)},
                      {"beta_mean", nan_null(f.beta_mean)},
                      {"alpha_beta", nan_null(f.alpha * f.beta_mean)}});
    }
    std::ofstream(fs::path(out_dir) / "summary.json") << json{{"name", cfg.name}, {"fits", fits}}.dump(2) << '\n';
  }
  return out;
}

void write_travelwave_table(std::ostream& os, const TravelWaveResult& r) {
  os << std::setprecision(kDigits);
  os << "amplitude,alpha,status,steady,V,G_c_eps,beta,L_ratio,identity_residual,max_rel_residual,irreversibility_violations,range_violations\n";
  for (const auto& row : r.rows) {
    os << row.amplitude << ',' << row.alpha << ',' << to_string(row.status) << ',' << (row.steady ? 1 : 0) << ','
       << row.velocity << ',' << row.g_c_eps << ',' << row.beta << ',' << row.l_ratio << ',' << row.identity_residual
       << ',' << row.max_rel_residual << ',' << row.irreversibility_violations << ',' << row.range_violations << '\n';
  }
}

std::vector<SweepFit> sweep_fits(const TravelWaveResult& result) {
  std::vector<double> alphas;
  for (const auto& row : result.rows) {
    if (std::find(alphas.begin(), alphas.end(), row.alpha) == alphas.end()) alphas.push_back(row.alpha);
  }
  std::vector<SweepFit> out;
  for (double a : alphas) {
    SweepFit f;
    f.alpha = a;
    std::vector<double> v, g;
    double beta = 0.0;
    for (const auto& row : result.rows) {
      if (row.alpha != a || row.status != RunStatus::ok || !row.steady) continue;
      v.push_back(row.velocity);
      g.push_back(row.g_c_eps);
      beta += row.beta;
    }
    f.points = v.size();
    f.fit = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    f.beta_mean = v.empty() ? std::numeric_limits<double>::quiet_NaN() : beta / static_cast<double>(v.size());
    if (v.size() >= 2) {
      try {
        f.fit = fit_line(v, g);
      } catch (const std::invalid_argument&) {
        // All velocities equal: no slope.
      }
    }
    out.push_back(f);
  }
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.slope = least_squares_slope(x, y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace vfrac

// ---------------------------------------------------------------------------

namespace vfrac {

namespace {

std::string format_value(const char* label, double v) {
  std::ostringstream os;
  os << label << " = " << std::setprecision(6) << v;
  return os.str();
}

std::string with_alpha(const char* name, double alpha) {
  std::ostringstream os;
  os << name << "[alpha=" << std::setprecision(6) << alpha << ']';
  return os.str();
}

SeedCheck rate_law_check(const RateLaw& law, const std::string& name) {
  double worst = 0.0;
  for (double v : {0.0, 1e-3, 0.1, 0.5, 1.0, 3.0}) {
    double a = 0.0;
    try {
      a = law.alpha_star(v);
    } catch (const OutOfRangeError&) {
      continue;
    }
    worst = std::max(worst, std::abs(law.beta_star(a) - v) / std::max(1.0, v));
  }
  return {name, worst <= 1e-9, format_value("max relative |beta*(alpha*(v)) - v|", worst)};
}

// Total energy with u frozen, as a function of z.
double frozen_energy(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                     const LoadState& loads) {
  return elastic_energy(mesh, u, z, mat, loads) + surface_energy(mesh, z, mat);
}

}  // namespace

std::vector<SeedCheck> seed_check(const ScenarioConfig& cfg) {
  std::vector<SeedCheck> out;
  try {
    cfg.validate();
    out.push_back({"config_valid", true, ""});
  } catch (const std::exception& e) {
    out.push_back({"config_valid", false, e.what()});
    return out;
  }

  const TriMesh mesh = build_rect_mesh(cfg.mesh.width, cfg.mesh.height, cfg.mesh.h, cfg.mesh.tags, cfg.mesh.origin);
  try {
    validate_mesh(mesh);
    double area = 0.0;
    for (std::size_t e = 0; e < mesh.triangle_count(); ++e) area += signed_area(mesh, e);
    const double expected = cfg.mesh.width * cfg.mesh.height;
    const double rel = std::abs(area - expected) / expected;
    out.push_back({"mesh", rel <= 1e-12, format_value("relative area error", rel)});
  } catch (const std::exception& e) {
    out.push_back({"mesh", false, e.what()});
    return out;
  }

  try {
    cfg.loads.verify_rates(cfg.time.t0, cfg.time.t1);
    out.push_back({"load_rates", true, "analytic rates match central differences"});
  } catch (const std::exception& e) {
    out.push_back({"load_rates", false, e.what()});
  }

  const MaterialParams& mat = cfg.material;
  const NodalField z0 = initial_damage_field(mesh, cfg.initial_damage, mat.epsilon);
  {
    const auto [lo, hi] = std::minmax_element(z0.values.begin(), z0.values.end());
    out.push_back({"initial_damage_range", *lo >= 0.0 && *hi <= 1.0,
                   format_value("min", *lo) + ", " + format_value("max", *hi)});
  }

  // Loads at the end of the first step, where something is usually applied.
  const double t = std::min(cfg.time.t0 + cfg.time.dt, cfg.time.t1);
  const LoadState loads = make_load_state(mesh, cfg.loads, t);
  NodalField u;
  try {
    u = solve_displacement(mesh, z0, mat, loads, cfg.solver.residual_tolerance);
  } catch (const std::exception& e) {
    out.push_back({"elastic_minimizer", false, e.what()});
    return out;
  }

  {
    // Random admissible perturbations must not lower the energy.
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<char> fixed(2 * mesh.node_count(), 0);
    for (int n : loads.dirichlet_nodes) fixed[2 * static_cast<std::size_t>(n)] = fixed[2 * static_cast<std::size_t>(n) + 1] = 1;
    const double e0 = elastic_energy(mesh, u, z0, mat, loads);
    double scale = 1e-3;
    for (double v : u.values) scale = std::max(scale, 1e-3 * std::abs(v));
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      NodalField up = u;
      for (std::size_t d = 0; d < up.values.size(); ++d) {
        if (!fixed[d]) up.values[d] += scale * dist(rng);
      }
      worst = std::min(worst, elastic_energy(mesh, up, z0, mat, loads) - e0);
    }
    const double tol = 1e-10 * std::max(1.0, std::abs(e0));
    out.push_back({"elastic_minimizer", worst >= -tol, format_value("min energy change under perturbation", worst)});
  }

  const ElementField w = energy_density(mesh, u, mat);
  {
    // Driving force against central differences of the frozen-u energy.
    const NodalField f = driving_force(mesh, z0, w, mat);
    const auto mass = lumped_mass(mesh);
    const auto pinned = damage_pinned_nodes(mesh);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, mesh.node_count() - 1);
    const double h = 1e-6;
    double worst = 0.0;
    for (int k = 0; k < 12; ++k) {
      const std::size_t i = pick(rng);
      if (pinned[i]) continue;
      NodalField zp = z0, zm = z0;
      zp.values[i] += h;
      zm.values[i] -= h;
      const double fd = -(frozen_energy(mesh, u, zp, mat, loads) - frozen_energy(mesh, u, zm, mat, loads)) / (2.0 * h);
      const double an = f.values[i] * mass[i];
      worst = std::max(worst, std::abs(fd - an) / std::max(1e-8, std::abs(an) + mass[i]));
    }
    out.push_back({"driving_force", worst <= 1e-5, format_value("max scaled FD mismatch", worst)});
  }

  try {
    PhaseFieldStepInfo info;
    const NodalField z1 = step_phase_field(mesh, z0, w, cfg.time.dt, mat, &info);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      if (z1.values[i] < z0.values[i] || z1.values[i] > 1.0) ++bad;
    }
    out.push_back({"irreversibility", bad == 0, format_value("violating nodes", static_cast<double>(bad))});
    out.push_back({"stability_guideline", true,
                   format_value("dt", cfg.time.dt) + ", " + format_value("guideline", info.stable_dt) +
                       (info.stability_ok ? "" : " (warning only)")});
  } catch (const std::exception& e) {
    out.push_back({"irreversibility", false, e.what()});
  }

  out.push_back(rate_law_check(mat.rate_law, "rate_law_inverse"));
  return out;
}

std::vector<SeedCheck> seed_check(const Figure3Config& cfg) {
  std::vector<SeedCheck> out;
  try {
    cfg.validate();
    out.push_back({"config_valid", true, ""});
  } catch (const std::exception& e) {
    out.push_back({"config_valid", false, e.what()});
    return out;
  }
  const EnergyProfile profile = figure3_energy_profile(cfg.l0);
  try {
    profile.check_nonnegative();
    out.push_back({"profile_nonnegative", true, "G >= 0 on a 41 x 41 grid"});
  } catch (const std::exception& e) {
    out.push_back({"profile_nonnegative", false, e.what()});
  }
  for (double a : cfg.alphas) {
    const RateLaw law = RateLaw::linear(a);
    std::size_t failures = 0;
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const double l = profile.l_min + (profile.l_max - profile.l_min) * i / 20.0;
        const double tt = cfg.t0 + (cfg.t1 - cfg.t0) * j / 20.0;
        const double g = profile.g(l, tt);
        if (!kkt_check(law.beta_star(g - cfg.g_c), g, cfg.g_c, law, 1e-10)) ++failures;
      }
    }
    out.push_back({with_alpha("kkt", a), failures == 0,
                   format_value("failing grid points", static_cast<double>(failures))});
    const auto traj = integrate_crack_length(profile, cfg.g_c, law, cfg.l0, cfg.t0,
                                             std::min(cfg.t1, cfg.t0 + 100.0 * cfg.dt), cfg.dt);
    bool monotone = true;
    for (std::size_t k = 1; k < traj.size(); ++k) monotone = monotone && traj.length[k] >= traj.length[k - 1];
    out.push_back({with_alpha("monotone_growth", a), monotone, "first 100 steps"});
    out.push_back(rate_law_check(law, with_alpha("rate_law_inverse", a)));
  }
  return out;
}

std::vector<SeedCheck> seed_check(const TravelWaveConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    return {{"config_valid", false, e.what()}};
  }
  auto out = seed_check(strip_scenario(cfg, cfg.amplitudes.front(), cfg.alphas.front()));
  for (double a : cfg.alphas) {
    out.push_back(rate_law_check(RateLaw::linear(a), with_alpha("rate_law_inverse", a)));
  }
  return out;
}

}  // namespace vfrac
