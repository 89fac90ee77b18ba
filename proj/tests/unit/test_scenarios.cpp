#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "vfrac/scenarios.hpp"
#include "vfrac/vtk.hpp"

namespace vfrac {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("vfrac_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig zero_load_config() {
  ScenarioConfig c;
  c.name = "zero";
  c.mesh = {1.0, 1.0, 0.1, {}, TagRule{BoundaryTag::dirichlet, BoundaryTag::neumann_free, BoundaryTag::neumann_free,
                                       BoundaryTag::neumann_free}};
  c.time = {0.0, 0.1, 0.01};
  c.output.vtk_every = 5;
  return c;
}

ScenarioConfig stretch_config(TimeScheme scheme) {
  ScenarioConfig c;
  c.name = "stretch";
  c.mesh = {1.0, 2.0, 0.1, {0.0, -1.0}, TagRule::all(BoundaryTag::dirichlet)};
  c.material.plane_mode = PlaneMode::plane_stress;
  c.loads = testing::affine_program({0, 0, 0, 1}, {}, TimeProfile::ramp_hold(0.05, 0.5));
  c.time = {0.0, 1.0, 0.01};
  c.solver.time_scheme = scheme;
  return c;
}

TravelWaveConfig small_strip() {
  TravelWaveConfig c;
  c.strip = {0.5, 4.0, 0.1, 0.5};
  c.material.plane_mode = PlaneMode::plane_stress;
  c.material.epsilon = 0.2;
  c.amplitudes = {0.7, 0.8};
  c.alphas = {0.5, 1.0};
  c.time = {0.0, 0.3, 0.01};
  c.solver.stability_warnings = false;
  return c;
}

TEST(InitialDamage, Kinds) {
  const auto m = build_rect_mesh(2.0, 2.0, 0.1, TagRule{}, {0.0, -1.0});
  for (double v : initial_damage_field(m, {}, 0.1).values) EXPECT_EQ(v, 0.0);
  InitialDamage c;
  c.kind = InitialDamage::Kind::constant;
  c.value = 0.25;
  for (double v : initial_damage_field(m, c, 0.1).values) EXPECT_EQ(v, 0.25);
  InitialDamage seed;
  seed.kind = InitialDamage::Kind::seed_crack;
  seed.from = {0.0, 0.0};
  seed.to = {1.0, 0.0};
  const auto z = initial_damage_field(m, seed, 0.1);
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    const Point p = m.nodes[i];
    const double d = p.x <= 1.0 ? std::abs(p.y) : std::hypot(p.x - 1.0, p.y);
    EXPECT_NEAR(z(i), std::exp(-d / 0.1), 1e-14);
  }
}

TEST(RunFpfm, ZeroLoadNothingHappens) {
  const auto dir = scratch_dir("zero");
  const auto r = run_fpfm(zero_load_config(), dir.string());
  EXPECT_EQ(r.status, RunStatus::ok);
  EXPECT_EQ(r.steps, 10u);
  for (double v : r.z.values) EXPECT_EQ(v, 0.0);
  for (const auto& e : r.ledger.entries()) {
    EXPECT_EQ(e.e_el, 0.0);
    EXPECT_EQ(e.e_s, 0.0);
    if (e.step > 0) EXPECT_EQ(e.residual, 0.0);
  }
  EXPECT_TRUE(fs::exists(dir / "ledger.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  EXPECT_TRUE(fs::exists(dir / "vtk" / "step_000000.vtk"));
  EXPECT_TRUE(fs::exists(dir / "vtk" / "step_000010.vtk"));
  const auto summary = slurp(dir / "summary.json");
  EXPECT_NE(summary.find("\"status\": \"OK\""), std::string::npos);
  EXPECT_NE(summary.find("\"max_rel_residual\""), std::string::npos);
}

TEST(RunFpfm, UniformStretchTracksElasticOracle) {
  const auto cfg = stretch_config(TimeScheme::trapezoidal);
  const auto r = run_fpfm(cfg);
  ASSERT_EQ(r.status, RunStatus::ok);
  const double area = 2.0, modulus = cfg.material.p_wave_modulus();
  for (const auto& e : r.ledger.entries()) {
    const double a = cfg.loads.dirichlet_profile.value(e.t);
    const double oracle = 0.5 * modulus * a * a * area;
    EXPECT_NEAR(e.e_el, oracle, 5e-3 * oracle + 1e-15) << e.t;
  }
  double zmax = 0.0;
  for (double v : r.z.values) zmax = std::max(zmax, v);
  EXPECT_LT(zmax, 5e-3);
  EXPECT_LE(r.ledger.max_rel_residual(), cfg.output.dissipation_tolerance);
  EXPECT_EQ(r.irreversibility_violations, 0u);
  EXPECT_EQ(r.range_violations, 0u);
}

TEST(RunFpfm, ImpossibleToleranceMarksFailedIdentity) {
  auto cfg = stretch_config(TimeScheme::semi_implicit);
  cfg.output.dissipation_tolerance = 1e-12;
  EXPECT_EQ(run_fpfm(cfg).status, RunStatus::failed_identity);
}

TEST(RunFpfm, SolverFailureKeepsLastConsistentState) {
  auto cfg = stretch_config(TimeScheme::semi_implicit);
  cfg.solver.residual_tolerance = 1e-300;
  const auto dir = scratch_dir("solver_failure");
  const auto r = run_fpfm(cfg, dir.string());
  EXPECT_EQ(r.status, RunStatus::solver_failure);
  EXPECT_FALSE(r.message.empty());
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_NE(slurp(dir / "summary.json").find("SOLVER-FAILURE"), std::string::npos);
}

TEST(RunFpfm, SeededStripPropagatesIrreversibly) {
  auto tw = small_strip();
  tw.time.t1 = 0.6;
  auto cfg = strip_scenario(tw, 1.0, 0.5);
  cfg.solver.time_scheme = TimeScheme::trapezoidal;
  const auto r = run_fpfm(cfg);
  ASSERT_EQ(r.status, RunStatus::ok) << r.message;
  ASSERT_FALSE(r.strip.empty());
  EXPECT_GT(r.strip.back().x_tip, r.strip.front().x_tip);
  EXPECT_GT(r.strip.back().l_eps, 0.0);
  EXPECT_EQ(r.irreversibility_violations, 0u);
  EXPECT_EQ(r.range_violations, 0u);
}

TEST(RunFpfm, OutputsAreDeterministic) {
  auto cfg = strip_scenario(small_strip(), 0.9, 0.5);
  cfg.output.vtk_every = 10;
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  run_fpfm(cfg, a.string());
  run_fpfm(cfg, b.string());
  for (const char* f : {"ledger.csv", "strip.csv", "config.json", "vtk/step_000010.vtk"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(StripScenario, BuildsTheDocumentedSetup) {
  const auto tw = small_strip();
  const auto c = strip_scenario(tw, 0.8, 1.0);
  EXPECT_DOUBLE_EQ(c.mesh.width, 4.0);
  EXPECT_DOUBLE_EQ(c.mesh.height, 1.0);
  EXPECT_DOUBLE_EQ(c.mesh.origin.y, -0.5);
  EXPECT_EQ(c.mesh.tags.top, BoundaryTag::dirichlet);
  EXPECT_EQ(c.mesh.tags.bottom, BoundaryTag::dirichlet);
  EXPECT_EQ(c.mesh.tags.left, BoundaryTag::neumann_free);
  EXPECT_EQ(c.initial_damage.kind, InitialDamage::Kind::seed_crack);
  EXPECT_DOUBLE_EQ(c.initial_damage.to.x, 0.5);
  EXPECT_TRUE(c.output.strip_diagnostics);
  EXPECT_DOUBLE_EQ(c.material.rate_law.proportional_coefficient(), 1.0);
  EXPECT_DOUBLE_EQ(c.loads.dirichlet_profile.value(1.0) * c.loads.dirichlet_gradient[3] * 0.5, 0.8);
}

TEST(TravelingWave, TableIsIdenticalAcrossWorkerCounts) {
  auto cfg = small_strip();
  cfg.workers = 1;
  const auto a = scratch_dir("tw_1"), b = scratch_dir("tw_2");
  const auto ra = run_traveling_wave(cfg, a.string());
  cfg.workers = 2;
  const auto rb = run_traveling_wave(cfg, b.string());
  ASSERT_EQ(ra.rows.size(), 4u);
  EXPECT_EQ(slurp(a / "table.csv"), slurp(b / "table.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  EXPECT_TRUE(fs::exists(a / "timing.json"));
  // Amplitude-major order, alphas inner.
  EXPECT_EQ(ra.rows[1].amplitude, 0.7);
  EXPECT_EQ(ra.rows[1].alpha, 1.0);
  EXPECT_EQ(ra.rows[2].amplitude, 0.8);
  EXPECT_EQ(slurp(a / "table.csv").substr(0, 9), "amplitude");
}

TEST(TravelingWave, FitsPerAlpha) {
  TravelWaveResult r;
  auto add = [&](double alpha, double v, double g, bool steady) {
    TravelWaveRow row;
    row.alpha = alpha;
    row.velocity = v;
    row.g_c_eps = g;
    row.beta = 0.2;
    row.steady = steady;
    r.rows.push_back(row);
  };
  add(0.5, 1.0, 1.1, true);
  add(0.5, 2.0, 1.2, true);
  add(0.5, 3.0, 1.3, true);
  add(0.5, 9.0, 7.0, false);  // ignored
  add(1.0, 1.0, 1.2, true);
  const auto fits = sweep_fits(r);
  ASSERT_EQ(fits.size(), 2u);
  EXPECT_EQ(fits[0].points, 3u);
  EXPECT_NEAR(fits[0].fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fits[0].fit.slope, 0.1, 1e-12);
  EXPECT_NEAR(fits[0].beta_mean, 0.2, 1e-15);
  EXPECT_TRUE(std::isnan(fits[1].fit.slope));
}

TEST(FitLine, ExactLine) {
  const auto f = fit_line({0.0, 1.0, 2.0}, {1.0, 1.5, 2.0});
  EXPECT_NEAR(f.intercept, 1.0, 1e-15);
  EXPECT_NEAR(f.slope, 0.5, 1e-15);
}

TEST(Figure3, RunOrderingAndOutputs) {
  Figure3Config cfg;
  cfg.alphas = {0.2, 0.01, 0.1, 0.05};
  cfg.dt = 1e-4;
  const auto r = run_figure3(cfg);
  ASSERT_EQ(r.alphas, (std::vector<double>{0.01, 0.05, 0.1, 0.2}));
  for (std::size_t k = 0; k < r.trajectories.size(); ++k) {
    const auto& tr = r.trajectories[k];
    EXPECT_EQ(tr.status, CrackTrajectory::Status::completed);
    for (std::size_t i = 1; i < tr.size(); ++i) ASSERT_GE(tr.length[i], tr.length[i - 1]);
    if (k > 0) {
      for (std::size_t i = 0; i < tr.size(); ++i) ASSERT_LE(tr.length[i], r.trajectories[k - 1].length[i] + 1e-12);
    }
  }
  const auto dir = scratch_dir("figure3");
  write_figure3(dir.string(), cfg, r);
  const auto csv = slurp(dir / "figure3.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,L_0.01,L_0.05,L_0.1,L_0.2");
  EXPECT_TRUE(fs::exists(dir / "trajectory_alpha_0.01.csv"));
  EXPECT_NE(slurp(dir / "figure3_summary.json").find("jump_fraction"), std::string::npos);
}

TEST(Figure3, GrowthFractionAndInterpolation) {
  CrackTrajectory tr;
  tr.t = {0.0, 1.0, 2.0};
  tr.length = {0.0, 1.0, 4.0};
  EXPECT_DOUBLE_EQ(length_at(tr, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(length_at(tr, 1.5), 2.5);
  EXPECT_THROW(length_at(tr, 2.5), std::out_of_range);
  EXPECT_DOUBLE_EQ(growth_fraction(tr, 1.0, 2.0), 0.75);
  tr.length = {1.0, 1.0, 1.0};
  EXPECT_EQ(growth_fraction(tr, 0.0, 1.0), 0.0);
}

TEST(SeedCheck, PassesOnValidConfigs) {
  for (const auto& c : seed_check(stretch_config(TimeScheme::semi_implicit))) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  Figure3Config f;
  f.dt = 1e-3;
  for (const auto& c : seed_check(f)) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  const auto tw = seed_check(small_strip());
  EXPECT_FALSE(tw.empty());
  for (const auto& c : tw) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(SeedCheck, ReportsInvalidConfig) {
  auto cfg = stretch_config(TimeScheme::semi_implicit);
  cfg.time.dt = -1.0;
  const auto checks = seed_check(cfg);
  ASSERT_FALSE(checks.empty());
  EXPECT_EQ(checks[0].name, "config_valid");
  EXPECT_FALSE(checks[0].passed);
}

TEST(Vtk, LegacyAsciiLayout) {
  const auto m = build_rect_mesh(1.0, 1.0, 0.5, TagRule{});
  std::vector<double> z(m.node_count(), 0.25), u(2 * m.node_count(), 0.5), w(m.triangle_count(), 2.0);
  std::ostringstream os;
  write_vtk(os, m, {{"z", 1, z}, {"u", 2, u}}, {{"w", 1, w}}, "title");
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  EXPECT_EQ(lines[0], "# vtk DataFile Version 3.0");
  EXPECT_EQ(lines[1], "title");
  EXPECT_EQ(lines[2], "ASCII");
  EXPECT_EQ(lines[3], "DATASET UNSTRUCTURED_GRID");
  EXPECT_EQ(lines[4], "POINTS 9 double");
  EXPECT_EQ(lines[14], "CELLS 8 32");
  EXPECT_EQ(lines[15].substr(0, 2), "3 ");
  EXPECT_EQ(lines[23], "CELL_TYPES 8");
  EXPECT_EQ(lines[24], "5");
  const auto text = os.str();
  EXPECT_NE(text.find("POINT_DATA 9\nSCALARS z double 1\nLOOKUP_TABLE default\n0.25\n"), std::string::npos);
  EXPECT_NE(text.find("VECTORS u double\n0.5 0.5 0\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_DATA 8\nSCALARS w double 1\n"), std::string::npos);
  EXPECT_THROW(write_vtk(os, m, {{"z", 1, {1.0}}}, {}), std::invalid_argument);
}

}  // namespace
}  // namespace vfrac
