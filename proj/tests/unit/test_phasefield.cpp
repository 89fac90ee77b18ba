#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "vfrac/elasticity.hpp"
#include "vfrac/phasefield.hpp"

namespace vfrac {
namespace {

using testing::test_material;

TriMesh free_square(double h = 0.1) { return build_rect_mesh(1.0, 1.0, h, TagRule{}); }

ElementField uniform_w(const TriMesh& m, double c) { return ElementField(m.triangle_count(), c); }

TEST(SurfaceEnergy, ZeroAndConstantFields) {
  const auto m = build_rect_mesh(2.0, 1.5, 0.25, TagRule{});
  const auto mat = test_material();
  EXPECT_EQ(surface_energy(m, NodalField::scalar(m.node_count()), mat), 0.0);
  const double c = 0.37, area = 3.0;
  EXPECT_NEAR(surface_energy(m, NodalField::scalar(m.node_count(), c), mat),
              mat.g_c * area * c * c / (2 * mat.epsilon), 1e-13);
}

TEST(SurfaceEnergy, OptimalProfileApproachesGcPerUnitLength) {
  // z = exp(-|x - x0| / eps) across a unit-depth strip: the continuum value is
  // G_c * (1 - exp(-2 x0 / eps)) for a strip (0, 2 x0), i.e. G_c up to a tiny tail.
  auto mat = test_material();
  mat.g_c = 1.7;
  const double eps = mat.epsilon, x0 = 1.0;
  const double exact = mat.g_c * (1.0 - std::exp(-2.0 * x0 / eps));
  double prev = 1.0;
  for (double h : {eps / 4, eps / 8, eps / 16}) {
    const auto m = build_rect_mesh(2 * x0, 1.0, h, TagRule{});
    NodalField z = NodalField::scalar(m.node_count());
    for (std::size_t i = 0; i < m.node_count(); ++i) z(i) = std::exp(-std::abs(m.nodes[i].x - x0) / eps);
    const double err = std::abs(surface_energy(m, z, mat) - exact) / exact;
    EXPECT_LT(err, prev / 3.0) << h;
    prev = err;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(DrivingForce, Examples) {
  const auto m = free_square();
  const auto mat = test_material();
  const std::size_t n = m.node_count();
  for (double f : driving_force(m, NodalField::scalar(n), uniform_w(m, 0.8), mat).values) EXPECT_NEAR(f, 0.8, 1e-13);
  for (double f : driving_force(m, NodalField::scalar(n), uniform_w(m, 0.0), mat).values) EXPECT_EQ(f, 0.0);
  for (double f : driving_force(m, NodalField::scalar(n, 1.0), uniform_w(m, 0.0), mat).values) {
    EXPECT_NEAR(f, -mat.g_c / mat.epsilon, 1e-10);
  }
}

TEST(DrivingForce, UniformFieldsReduceToPointwiseForm) {
  const auto m = free_square();
  const auto mat = test_material();
  const double z0 = 0.3, c = 2.5;
  const auto f = driving_force(m, NodalField::scalar(m.node_count(), z0), uniform_w(m, c), mat);
  for (double v : f.values) EXPECT_NEAR(v, c * (1 - z0) - mat.g_c * z0 / mat.epsilon, 1e-12);
}

// E_tot for frozen u: 1/2 sum_e ((1 - zbar)^2 + eta) w_e A_e + surface energy.
double frozen_total(const TriMesh& m, const NodalField& z, const ElementField& w, const MaterialParams& mat) {
  double e = surface_energy(m, z, mat);
  for (std::size_t k = 0; k < m.triangle_count(); ++k) {
    const auto& t = m.triangles[k];
    const double zbar = (z(t[0]) + z(t[1]) + z(t[2])) / 3.0;
    e += 0.5 * ((1 - zbar) * (1 - zbar) + mat.residual_stiffness) * w[k] * signed_area(m, k);
  }
  return e;
}

TEST(DrivingForce, IsMinusTheVariationalDerivative) {
  testing::Gen gen(51);
  const auto m = build_rect_mesh(1.0, 1.0, 0.05, TagRule{});
  const auto mat = test_material();
  const auto mass = lumped_mass(m);
  ElementField w(m.triangle_count());
  for (double& v : w) v = gen.uniform(0.0, 5.0);
  const auto z = gen.bump(m, 0.7, 0.3);
  const auto f = driving_force(m, z, w, mat);
  for (int k = 0; k < 10; ++k) {
    NodalField d = NodalField::scalar(m.node_count());
    for (double& v : d.values) v = gen.uniform(-1, 1);
    const double h = 1e-6;
    auto zp = z, zm = z;
    for (std::size_t i = 0; i < z.values.size(); ++i) {
      zp.values[i] += h * d.values[i];
      zm.values[i] -= h * d.values[i];
    }
    const double fd = (frozen_total(m, zp, w, mat) - frozen_total(m, zm, w, mat)) / (2 * h);
    double analytic = 0.0;
    for (std::size_t i = 0; i < z.values.size(); ++i) analytic -= f.values[i] * mass[i] * d.values[i];
    EXPECT_NEAR(fd, analytic, 1e-6 * std::abs(analytic));
  }
}

TEST(DrivingForce, PinnedOnLoadedEdges) {
  TagRule rule;
  rule.top = BoundaryTag::neumann_loaded;
  const auto m = build_rect_mesh(1.0, 1.0, 0.25, rule);
  const auto pinned = damage_pinned_nodes(m);
  const auto f = driving_force(m, NodalField::scalar(m.node_count()), uniform_w(m, 3.0), test_material());
  int count = 0;
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    if (!pinned[i]) continue;
    ++count;
    EXPECT_DOUBLE_EQ(m.nodes[i].y, 1.0);
    EXPECT_EQ(f(i), 0.0);
  }
  EXPECT_EQ(count, 5);
  const auto z = step_phase_field(m, NodalField::scalar(m.node_count()), uniform_w(m, 3.0), 0.01, test_material());
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    if (pinned[i]) EXPECT_EQ(z(i), 0.0);
  }
}

TEST(ProjectToNodes, AreaWeightedAverage) {
  const auto m = build_rect_mesh(1.0, 1.0, 0.5, TagRule{});
  for (double v : project_to_nodes(m, uniform_w(m, 2.0)).values) EXPECT_NEAR(v, 2.0, 1e-15);
  ElementField w(m.triangle_count(), 0.0);
  w[0] = 6.0;
  const auto p = project_to_nodes(m, w);
  for (int k = 0; k < 3; ++k) {
    const int node = m.triangles[0][k];
    int incident = 0;
    for (const auto& t : m.triangles)
      for (int j : t) incident += j == node;
    EXPECT_NEAR(p(node), 6.0 / incident, 1e-14);  // equal areas on a uniform grid
  }
}

TEST(Step, NoDrivingForceKeepsDamage) {
  const auto m = free_square();
  const auto z = step_phase_field(m, NodalField::scalar(m.node_count()), uniform_w(m, 0.0), 0.01, test_material());
  for (double v : z.values) EXPECT_EQ(v, 0.0);
}

TEST(Step, UniformLoadMatchesScalarBackwardEuler) {
  const auto m = free_square();
  const auto mat = test_material();
  const double c = 2.0, alpha = 0.1;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    const auto z = step_phase_field(m, NodalField::scalar(m.node_count()), uniform_w(m, c), dt, mat);
    const double be = dt * c / (alpha + dt * (c + mat.g_c / mat.epsilon));
    for (double v : z.values) EXPECT_NEAR(v, be, 1e-12);
    // and the small-dt form dt c / alpha
    EXPECT_NEAR(z(0), dt * c / alpha, 2.0 * dt * dt * c * (c + mat.g_c / mat.epsilon) / (alpha * alpha));
  }
}

TEST(Step, FullyDamagedIsAbsorbing) {
  const auto m = free_square();
  const auto z = step_phase_field(m, NodalField::scalar(m.node_count(), 1.0), uniform_w(m, 5.0), 0.1, test_material());
  for (double v : z.values) EXPECT_EQ(v, 1.0);
}

TEST(Step, IrreversibleAndInRangeOnRandomInputs) {
  testing::Gen gen(52);
  const auto m = build_rect_mesh(1.0, 1.0, 0.1, TagRule{});
  for (int trial = 0; trial < 30; ++trial) {
    auto mat = test_material();
    mat.rate_law = gen.coin() ? RateLaw::linear(gen.uniform(0.01, 1.0)) : RateLaw::power(gen.uniform(0.05, 1.0), gen.uniform(0.5, 2.5));
    ElementField w(m.triangle_count());
    for (double& v : w) v = gen.uniform(0.0, 30.0);
    auto z = gen.bump(m, gen.uniform(0.0, 1.0), gen.uniform(0.05, 0.5));
    PhaseFieldSolver solver(m, mat);
    for (int s = 0; s < 5; ++s) {
      const auto next = solver.step(z, w, gen.uniform(1e-4, 1e-1));
      for (std::size_t i = 0; i < z.values.size(); ++i) {
        ASSERT_GE(next(i), z(i));
        ASSERT_LE(next(i), 1.0);
      }
      z = next;
    }
  }
}

// Free nodes satisfy alpha*((z - z_old)/dt) = F(z); nodes held at z_old have
// F(z) <= 0 (complementarity of the bounded step).
void expect_step_kkt(const TriMesh& m, const NodalField& z_old, const NodalField& z, const ElementField& w, double dt,
                     const MaterialParams& mat, double tol) {
  const auto f = driving_force(m, z, w, mat);
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    const double rate = (z(i) - z_old(i)) / dt;
    if (z(i) >= 1.0) continue;
    if (z(i) - z_old(i) > 1e-7) {  // rate iteration stops at max|dz| <= 1e-8
      EXPECT_NEAR(mat.rate_law.alpha_star(rate), f(i), tol * (1.0 + std::abs(f(i)))) << i;
    } else {
      EXPECT_LE(f(i), tol) << i;
    }
  }
}

TEST(Step, SatisfiesBoundedRateEquation) {
  testing::Gen gen(53);
  const auto m = build_rect_mesh(1.0, 1.0, 0.1, TagRule{});
  auto mat = test_material();
  ElementField w(m.triangle_count());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto& t = m.triangles[k];
    const double x = (m.nodes[t[0]].x + m.nodes[t[1]].x + m.nodes[t[2]].x) / 3.0;
    w[k] = x < 0.5 ? 40.0 : 0.0;  // half the square is driven, the other half relaxes
  }
  const auto z_old = gen.bump(m, 0.5, 0.3);
  expect_step_kkt(m, z_old, step_phase_field(m, z_old, w, 0.01, mat), w, 0.01, mat, 1e-9);
  mat.rate_law = RateLaw::power(0.2, 2.0);
  expect_step_kkt(m, z_old, step_phase_field(m, z_old, w, 0.01, mat), w, 0.01, mat, 1e-6);
  mat.rate_law = RateLaw::power(0.2, 0.7);
  expect_step_kkt(m, z_old, step_phase_field(m, z_old, w, 0.01, mat), w, 0.01, mat, 1e-6);
}

TEST(Step, ProportionalPowerLawMatchesLinear) {
  testing::Gen gen(54);
  const auto m = free_square();
  auto lin = test_material();
  lin.rate_law = RateLaw::linear(0.37);
  auto pow = lin;
  pow.rate_law = RateLaw::power(0.37, 1.0);
  ElementField w(m.triangle_count());
  for (double& v : w) v = gen.uniform(0.0, 20.0);
  const auto z0 = gen.bump(m, 0.4, 0.2);
  const auto a = step_phase_field(m, z0, w, 0.01, lin);
  const auto b = step_phase_field(m, z0, w, 0.01, pow);
  EXPECT_LE(testing::max_abs_diff(a.values, b.values), 1e-12);
}

TEST(Step, TotalEnergyDoesNotIncreaseForFrozenLoads) {
  testing::Gen gen(55);
  TagRule rule;
  rule.bottom = rule.top = BoundaryTag::dirichlet;
  const auto m = build_rect_mesh(1.0, 1.0, 0.1, rule);
  const auto mat = test_material();
  const auto loads = make_load_state(
      m, testing::affine_program({0, 0, 0, 0.8}, {}, TimeProfile::constant(1.0)), 0.0);
  auto total = [&](const NodalField& z) {
    const auto u = solve_displacement(m, z, mat, loads);
    return elastic_energy(m, u, z, mat, loads) + surface_energy(m, z, mat);
  };
  auto z = gen.bump(m, 0.3, 0.2);
  for (int s = 0; s < 10; ++s) {
    const auto u = solve_displacement(m, z, mat, loads);
    const auto next = step_phase_field(m, z, energy_density(m, u, mat), 0.02, mat);
    EXPECT_LE(total(next), total(z) + 1e-12);
    z = next;
  }
}

TEST(Step, RateIterationReportsWork) {
  const auto m = free_square();
  auto mat = test_material();
  mat.rate_law = RateLaw::power(0.1, 2.0);
  PhaseFieldStepInfo info;
  step_phase_field(m, NodalField::scalar(m.node_count()), uniform_w(m, 3.0), 0.01, mat, &info);
  EXPECT_GT(info.iterations, 1);
  EXPECT_LE(info.increment, 1e-8);
  mat.rate_law = RateLaw::linear(0.1);
  step_phase_field(m, NodalField::scalar(m.node_count()), uniform_w(m, 3.0), 0.01, mat, &info);
  EXPECT_EQ(info.iterations, 1);
}

TEST(Step, StabilityGuideline) {
  auto mat = test_material();
  ElementField w{1.0, 4.0, 2.0};
  EXPECT_DOUBLE_EQ(stable_time_step(w, mat), 0.1 * 0.1 / 8.0);
  EXPECT_TRUE(std::isinf(stable_time_step(ElementField{0.0, 0.0}, mat)));
  mat.rate_law = RateLaw::power(0.1, 2.0);
  EXPECT_TRUE(std::isinf(stable_time_step(w, mat)));
}

TEST(Trapezoidal, SatisfiesAveragedRateEquation) {
  testing::Gen gen(56);
  const auto m = build_rect_mesh(1.0, 1.0, 0.1, TagRule{});
  const auto mat = test_material();
  ElementField w0(m.triangle_count()), w1(m.triangle_count());
  for (std::size_t k = 0; k < w0.size(); ++k) {
    w0[k] = gen.uniform(10.0, 30.0);
    w1[k] = w0[k] * gen.uniform(0.8, 1.2);
  }
  const auto z_old = gen.bump(m, 0.3, 0.3);
  const double dt = 0.005;
  PhaseFieldSolver solver(m, mat);
  const auto z = solver.step_trapezoidal(z_old, w0, w1, dt);
  const auto f0 = driving_force(m, z_old, w0, mat), f1 = driving_force(m, z, w1, mat);
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    ASSERT_GE(z(i), z_old(i));
    const double rate = (z(i) - z_old(i)) / dt;
    if (rate > 0.0 && z(i) < 1.0) EXPECT_NEAR(0.1 * rate, 0.5 * (f0(i) + f1(i)), 1e-9 * (1 + std::abs(f1(i))));
  }
}

TEST(Trapezoidal, SecondOrderOnUniformRelaxation) {
  // alpha z' = c - (c + G_c/eps) z has z(t) = c/k (1 - exp(-k t / alpha)).
  const auto m = build_rect_mesh(1.0, 1.0, 0.25, TagRule{});
  const auto mat = test_material();
  const double c = 3.0, k = c + mat.g_c / mat.epsilon, alpha = 0.1, t_end = 0.05;
  const auto w = uniform_w(m, c);
  auto error = [&](int steps, bool trapezoidal) {
    PhaseFieldSolver solver(m, mat);
    auto z = NodalField::scalar(m.node_count());
    const double dt = t_end / steps;
    for (int s = 0; s < steps; ++s) z = trapezoidal ? solver.step_trapezoidal(z, w, w, dt) : solver.step(z, w, dt);
    return std::abs(z(0) - c / k * (1 - std::exp(-k * t_end / alpha)));
  };
  EXPECT_NEAR(error(80, true) / error(160, true), 4.0, 0.2);
  EXPECT_NEAR(error(80, false) / error(160, false), 2.0, 0.2);
}

TEST(Trapezoidal, EqualStatesGiveNoUpdateWhenForceIsNegative) {
  const auto m = free_square();
  const auto z0 = NodalField::scalar(m.node_count(), 0.5);
  PhaseFieldSolver solver(m, test_material());
  const auto z = solver.step_trapezoidal(z0, uniform_w(m, 0.0), uniform_w(m, 0.0), 0.01);
  for (double v : z.values) EXPECT_EQ(v, 0.5);
}

TEST(PhaseFieldSolver, RejectsInvalidInputs) {
  const auto m = free_square(0.5);
  PhaseFieldSolver solver(m, test_material());
  EXPECT_THROW(solver.step(NodalField::scalar(3), uniform_w(m, 0.0), 0.1), std::invalid_argument);
  EXPECT_THROW(solver.step(NodalField::scalar(m.node_count()), ElementField(2), 0.1), std::invalid_argument);
  EXPECT_ANY_THROW(solver.step(NodalField::scalar(m.node_count()), uniform_w(m, 0.0), 0.0));
}

}  // namespace
}  // namespace vfrac
