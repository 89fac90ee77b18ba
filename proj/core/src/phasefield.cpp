#include "vfrac/phasefield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <variant>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "vfrac/error.hpp"

namespace vfrac {

namespace {

// Scalar P1 stiffness entries for one element, row-major 3x3.
std::array<double, 9> scalar_stiffness(const ElementGeometry& g) {
  std::array<double, 9> k{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) k[3 * i + j] = g.area * (g.dx[i] * g.dx[j] + g.dy[i] * g.dy[j]);
  }
  return k;
}

double gradient_energy(const TriMesh& mesh, const NodalField& z) {
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto g = element_geometry(mesh, e);
    const auto& t = mesh.triangles[e];
    double gx = 0.0, gy = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double zi = z.values[static_cast<std::size_t>(t[i])];
      gx += g.dx[i] * zi;
      gy += g.dy[i] * zi;
    }
    total += g.area * (gx * gx + gy * gy);
  }
  return total;
}

}  // namespace

double surface_energy(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat) {
  check_field(mesh, z, 1);
  const auto mass = lumped_mass(mesh);
  double m = 0.0;
  for (std::size_t i = 0; i < mesh.node_count(); ++i) m += mass[i] * z.values[i] * z.values[i];
  return 0.5 * mat.g_c * (mat.epsilon * gradient_energy(mesh, z) + m / mat.epsilon);
}

std::vector<char> damage_pinned_nodes(const TriMesh& mesh) {
  std::vector<char> pinned(mesh.node_count(), 0);
  for (int n : boundary_nodes(mesh, BoundaryTag::neumann_loaded)) pinned[static_cast<std::size_t>(n)] = 1;
  return pinned;
}

NodalField project_to_nodes(const TriMesh& mesh, const ElementField& w) {
  if (w.size() != mesh.triangle_count()) throw std::invalid_argument("element field does not match mesh");
  NodalField out = NodalField::scalar(mesh.node_count());
  std::vector<double> weight(mesh.node_count(), 0.0);
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const double a = signed_area(mesh, e);
    for (int n : mesh.triangles[e]) {
      out.values[static_cast<std::size_t>(n)] += a * w[e];
      weight[static_cast<std::size_t>(n)] += a;
    }
  }
  for (std::size_t i = 0; i < mesh.node_count(); ++i) out.values[i] /= weight[i];
  return out;
}

NodalField driving_force(const TriMesh& mesh, const NodalField& z, const ElementField& w, const MaterialParams& mat) {
  check_field(mesh, z, 1);
  if (w.size() != mesh.triangle_count()) throw std::invalid_argument("element field does not match mesh");
  const auto mass = lumped_mass(mesh);
  std::vector<double> acc(mesh.node_count(), 0.0);
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto g = element_geometry(mesh, e);
    const auto& t = mesh.triangles[e];
    const auto k = scalar_stiffness(g);
    double zbar = 0.0;
    for (int n : t) zbar += z.values[static_cast<std::size_t>(n)];
    zbar /= 3.0;
    const double elastic = (1.0 - zbar) * w[e] * g.area / 3.0;
    for (std::size_t i = 0; i < 3; ++i) {
      double kz = 0.0;
      for (std::size_t j = 0; j < 3; ++j) kz += k[3 * i + j] * z.values[static_cast<std::size_t>(t[j])];
      acc[static_cast<std::size_t>(t[i])] += elastic - mat.g_c * mat.epsilon * kz;
    }
  }
  const auto pinned = damage_pinned_nodes(mesh);
  NodalField f = NodalField::scalar(mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (pinned[i]) continue;
    f.values[i] = acc[i] / mass[i] - mat.g_c / mat.epsilon * z.values[i];
  }
  return f;
}

double stable_time_step(const ElementField& w, const MaterialParams& mat) {
  const double inf = std::numeric_limits<double>::infinity();
  if (!mat.rate_law.is_proportional()) return inf;
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, v);
  if (wmax <= 0.0) return inf;
  return mat.rate_law.proportional_coefficient() * mat.epsilon / (2.0 * wmax);
}

// ---------------------------------------------------------------------------

struct PhaseFieldSolver::Impl {
  enum class Slope { proportional, tangent, secant };

  const TriMesh* mesh;
  MaterialParams mat;
  std::vector<double> mass;
  std::vector<char> pinned;
  SparseMatrix A;
  std::vector<double> base;       // G_c eps K + G_c/eps M, in A's value order
  std::vector<int> positions;     // e*9 + i*3 + j -> value index or -1
  std::vector<int> diagonal;
  std::vector<double> areas;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool analyzed = false;
  Slope slope_kind;

  PhaseFieldOptions options;

  Impl(const TriMesh& m, const MaterialParams& p, PhaseFieldOptions o) : mesh(&m), mat(p), options(o) {
    mat.validate();
    mass = lumped_mass(m);
    pinned = damage_pinned_nodes(m);
    const auto n = static_cast<Eigen::Index>(m.node_count());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * m.triangle_count() + m.node_count());
    for (const auto& t : m.triangles) {
      for (int a : t) {
        for (int b : t) {
          if (!pinned[static_cast<std::size_t>(a)] && !pinned[static_cast<std::size_t>(b)]) trips.emplace_back(a, b, 0.0);
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(i, i, 0.0);
    A.resize(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    auto locate = [this](int r, int c) {
      const int* inner = A.innerIndexPtr();
      const int* it = std::lower_bound(inner + A.outerIndexPtr()[c], inner + A.outerIndexPtr()[c + 1], r);
      return static_cast<int>(it - inner);
    };
    diagonal.resize(m.node_count());
    for (std::size_t i = 0; i < m.node_count(); ++i) diagonal[i] = locate(static_cast<int>(i), static_cast<int>(i));

    base.assign(static_cast<std::size_t>(A.nonZeros()), 0.0);
    positions.assign(9 * m.triangle_count(), -1);
    areas.resize(m.triangle_count());
    for (std::size_t e = 0; e < m.triangle_count(); ++e) {
      const auto g = element_geometry(m, e);
      areas[e] = g.area;
      const auto k = scalar_stiffness(g);
      const auto& t = m.triangles[e];
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          const auto a = static_cast<std::size_t>(t[i]);
          const auto b = static_cast<std::size_t>(t[j]);
          if (pinned[a] || pinned[b]) continue;
          const int pos = locate(t[i], t[j]);
          positions[9 * e + 3 * i + j] = pos;
          base[static_cast<std::size_t>(pos)] += mat.g_c * mat.epsilon * k[3 * i + j];
        }
      }
    }
    for (std::size_t i = 0; i < m.node_count(); ++i) {
      base[static_cast<std::size_t>(diagonal[i])] += pinned[i] ? 1.0 : mat.g_c / mat.epsilon * mass[i];
    }

    const auto& law = mat.rate_law;
    if (law.is_proportional()) {
      slope_kind = Slope::proportional;
    } else if (const auto* pw = std::get_if<PowerRate>(&law.kind()); pw && pw->p > 1.0) {
      slope_kind = Slope::tangent;
    } else {
      slope_kind = Slope::secant;
    }
  }

  double node_slope(double v) const {
    const auto& law = mat.rate_law;
    switch (slope_kind) {
      case Slope::proportional: return law.proportional_coefficient();
      case Slope::tangent: return law.slope(v);
      case Slope::secant: {
        // Secant through the origin; at v = 0 fall back to a tiny positive rate.
        const double vs = std::max(v, 1e-12);
        return law.alpha_star(vs) / vs;
      }
    }
    return law.proportional_coefficient();
  }

  // The z system is diagonally dominant (mass terms scaled by 1/dt and 1/eps),
  // so Jacobi-preconditioned CG converges in a few dozen iterations; LDLT is
  // the fallback.
  Eigen::VectorXd solve_system(const std::vector<double>& values, const Eigen::VectorXd& rhs, const Eigen::VectorXd& guess) {
    std::copy(values.begin(), values.end(), A.valuePtr());
    cg.setTolerance(1e-13);
    cg.setMaxIterations(2000);
    cg.compute(A);
    Eigen::VectorXd x = cg.solveWithGuess(rhs, guess);
    if (cg.info() == Eigen::Success) return x;
    if (!analyzed) {
      ldlt.analyzePattern(A);
      analyzed = true;
    }
    ldlt.factorize(A);
    if (ldlt.info() != Eigen::Success) throw SolverError("phase-field factorization failed", cg.error());
    return ldlt.solve(rhs);
  }

  // Minimizes 1/2 x^T K x - r^T x over lo <= x <= 1, K stored in `full` on A's
  // pattern, by primal-dual active sets. The first pass is the unconstrained
  // solve; without active sets (or if they cycle) the result is clipped to the bounds.
  Eigen::VectorXd bounded_solve(const std::vector<double>& full, const Eigen::VectorXd& r, const std::vector<double>& lo,
                                int& solves, bool& converged) {
    const auto n = static_cast<std::size_t>(r.size());
    Eigen::VectorXd x = solve_system(full, r, Eigen::Map<const Eigen::VectorXd>(lo.data(), r.size()));
    ++solves;
    converged = true;
    if (!options.active_set) return x;

    enum : char { free_node = 0, at_lower = 1, at_upper = 2 };
    std::vector<char> state(n, free_node);
    auto update_sets = [&](const Eigen::VectorXd& grad) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (pinned[i]) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        char next = free_node;
        if (state[i] == free_node) {
          if (x[ii] < lo[i]) next = at_lower;
          else if (x[ii] > 1.0) next = lo[i] >= 1.0 ? at_lower : at_upper;
        } else if (state[i] == at_lower) {
          next = (grad[ii] > 0.0 || lo[i] >= 1.0) ? at_lower : free_node;
        } else {
          next = grad[ii] < 0.0 ? at_upper : free_node;
        }
        if (next != state[i]) {
          state[i] = next;
          changed = true;
        }
      }
      return changed;
    };

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(r.size());
    if (!update_sets(grad)) return x;
    const int* outer = A.outerIndexPtr();
    const int* inner = A.innerIndexPtr();
    for (int it = 0; it < options.max_active_set_iterations; ++it) {
      std::vector<double> vals = full;
      Eigen::VectorXd rr = r;
      for (std::size_t i = 0; i < n; ++i) {
        if (state[i] != free_node) rr[static_cast<Eigen::Index>(i)] = state[i] == at_lower ? lo[i] : 1.0;
      }
      for (std::size_t c = 0; c < n; ++c) {
        for (int p = outer[c]; p < outer[c + 1]; ++p) {
          const auto row = static_cast<std::size_t>(inner[p]);
          const bool fr = state[row] != free_node;
          const bool fc = state[c] != free_node;
          if (!fr && !fc) continue;
          if (row == c) {
            vals[static_cast<std::size_t>(p)] = 1.0;
            continue;
          }
          if (!fr) rr[static_cast<Eigen::Index>(row)] -= full[static_cast<std::size_t>(p)] * rr[static_cast<Eigen::Index>(c)];
          vals[static_cast<std::size_t>(p)] = 0.0;
        }
      }
      x = solve_system(vals, rr, x);
      ++solves;
      // Gradient K x - r on the fixed nodes gives the multiplier signs.
      grad.setZero();
      for (std::size_t c = 0; c < n; ++c) {
        const double xc = x[static_cast<Eigen::Index>(c)];
        for (int p = outer[c]; p < outer[c + 1]; ++p) {
          const auto row = static_cast<std::size_t>(inner[p]);
          if (state[row] != free_node) grad[inner[p]] += full[static_cast<std::size_t>(p)] * xc;
        }
      }
      grad -= r;
      if (!update_sets(grad)) return x;
    }
    converged = false;
    return x;
  }

  // Adds w_e A_e / 9 to every element block of `values` (B_w) and w_e A_e / 3 to cw.
  void add_elastic(const ElementField& w, double scale, std::vector<double>& values, std::vector<double>& cw) const {
    const TriMesh& m = *mesh;
    for (std::size_t e = 0; e < m.triangle_count(); ++e) {
      const double wa = scale * w[e] * areas[e];
      const auto& t = m.triangles[e];
      for (std::size_t i = 0; i < 3; ++i) {
        cw[static_cast<std::size_t>(t[i])] += wa / 3.0;
        for (std::size_t j = 0; j < 3; ++j) {
          const int p = positions[9 * e + 3 * i + j];
          if (p >= 0) values[static_cast<std::size_t>(p)] += wa / 9.0;
        }
      }
    }
  }

  // -(G_c eps K + G_c/eps M + B_w) z + c_w on free nodes: minus the energy gradient.
  std::vector<double> negative_gradient(const NodalField& z, const ElementField& w) const {
    const std::size_t n = mesh->node_count();
    std::vector<double> values = base;
    std::vector<double> out(n, 0.0);
    add_elastic(w, 1.0, values, out);
    const int* outer = A.outerIndexPtr();
    const int* inner = A.innerIndexPtr();
    for (std::size_t c = 0; c < n; ++c) {
      if (pinned[c]) continue;
      for (int p = outer[c]; p < outer[c + 1]; ++p) {
        const auto row = static_cast<std::size_t>(inner[p]);
        if (!pinned[row]) out[row] -= values[static_cast<std::size_t>(p)] * z.values[c];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) out[i] = 0.0;
    }
    return out;
  }

  // One step of S M (z - z_old)/dt = theta g(z; w_impl) + explicit_part, where g is
  // minus the energy gradient at frozen w_impl.
  NodalField advance(const NodalField& z_old, const ElementField& w_impl, double theta,
                     const std::vector<double>* explicit_part, double dt, PhaseFieldStepInfo* info) {
    const TriMesh& m = *mesh;
    check_damage_field(m, z_old);
    if (w_impl.size() != m.triangle_count()) throw std::invalid_argument("element field does not match mesh");
    if (!(dt > 0.0)) throw DomainError("phase-field step requires dt > 0");
    const std::size_t n = m.node_count();
    const ElementField& w = w_impl;

    // z-independent part: theta (base + B_w), and theta c_w plus the explicit part.
    std::vector<double> frozen = base;
    if (theta != 1.0) {
      // Pinned rows keep their unit diagonal.
      for (double& v : frozen) v *= theta;
      for (std::size_t i = 0; i < n; ++i) {
        if (pinned[i]) frozen[static_cast<std::size_t>(diagonal[i])] = 1.0;
      }
    }
    std::vector<double> cw(n, 0.0);
    add_elastic(w, theta, frozen, cw);
    if (explicit_part) {
      for (std::size_t i = 0; i < n; ++i) cw[i] += (*explicit_part)[i];
    }

    const auto& law = mat.rate_law;
    std::vector<double> v(n, 0.0);
    if (slope_kind != Slope::proportional) {
      const NodalField f0 = driving_force(m, z_old, w, mat);
      for (std::size_t i = 0; i < n; ++i) v[i] = law.beta_star(f0.values[i]);
    }

    NodalField z = z_old;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    const int max_iter = slope_kind == Slope::proportional ? 1 : 100;
    double increment = std::numeric_limits<double>::infinity();
    int iter = 0;
    int solves = 0;
    bool active_ok = true;
    while (iter < max_iter) {
      ++iter;
      std::vector<double> full = frozen;
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (pinned[i]) {
          rhs[ii] = 0.0;
          continue;
        }
        const double s = node_slope(v[i]);
        full[static_cast<std::size_t>(diagonal[i])] += mass[i] * s / dt;
        rhs[ii] = cw[i] + mass[i] * s * z_old.values[i] / dt;
        if (slope_kind != Slope::proportional) rhs[ii] -= mass[i] * (law.alpha_star(v[i]) - s * v[i]);
      }
      const Eigen::VectorXd zhat = bounded_solve(full, rhs, z_old.values, solves, active_ok);
      increment = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double zn = std::min(std::max(zhat[static_cast<Eigen::Index>(i)], z_old.values[i]), 1.0);
        increment = std::max(increment, std::abs(zn - z.values[i]));
        z.values[i] = zn;
        v[i] = (zn - z_old.values[i]) / dt;
      }
      if (slope_kind == Slope::proportional || increment <= 1e-8) break;
    }
    if (slope_kind != Slope::proportional && !(increment <= 1e-8)) {
      throw SolverError("phase-field rate iteration did not converge in 100 iterations", increment);
    }

    if (info) {
      info->iterations = iter;
      info->linear_solves = solves;
      info->active_set_converged = active_ok;
      info->increment = slope_kind == Slope::proportional ? 0.0 : increment;
      info->stable_dt = stable_time_step(w, mat);
      info->stability_ok = dt <= info->stable_dt;
    }
    return z;
  }
};

PhaseFieldSolver::PhaseFieldSolver(const TriMesh& mesh, const MaterialParams& mat, PhaseFieldOptions options)
    : impl_(std::make_unique<Impl>(mesh, mat, options)) {}
PhaseFieldSolver::~PhaseFieldSolver() = default;
PhaseFieldSolver::PhaseFieldSolver(PhaseFieldSolver&&) noexcept = default;
PhaseFieldSolver& PhaseFieldSolver::operator=(PhaseFieldSolver&&) noexcept = default;

NodalField PhaseFieldSolver::step(const NodalField& z_old, const ElementField& w, double dt, PhaseFieldStepInfo* info) {
  return impl_->advance(z_old, w, 1.0, nullptr, dt, info);
}

NodalField PhaseFieldSolver::step_trapezoidal(const NodalField& z_old, const ElementField& w_old,
                                              const ElementField& w_new, double dt, PhaseFieldStepInfo* info) {
  check_damage_field(*impl_->mesh, z_old);
  if (w_old.size() != impl_->mesh->triangle_count()) throw std::invalid_argument("element field does not match mesh");
  std::vector<double> half = impl_->negative_gradient(z_old, w_old);
  for (double& v : half) v *= 0.5;
  return impl_->advance(z_old, w_new, 0.5, &half, dt, info);
}

NodalField step_phase_field(const TriMesh& mesh, const NodalField& z_old, const ElementField& w, double dt,
                            const MaterialParams& mat, PhaseFieldStepInfo* info, PhaseFieldOptions options) {
  PhaseFieldSolver solver(mesh, mat, options);
  return solver.step(z_old, w, dt, info);
}

}  // namespace vfrac
