#include "vfrac/elasticity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

#include "vfrac/error.hpp"

namespace vfrac {

void check_field(const TriMesh& mesh, const NodalField& f, int components) {
  if (f.components != components || f.node_count != mesh.node_count() ||
      f.values.size() != mesh.node_count() * static_cast<std::size_t>(components)) {
    throw std::invalid_argument("nodal field does not match mesh (" + std::to_string(f.node_count) + " nodes x " +
                                std::to_string(f.components) + " components)");
  }
}

void check_damage_field(const TriMesh& mesh, const NodalField& z) {
  check_field(mesh, z, 1);
  for (double v : z.values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("damage field outside [0, 1]");
  }
}

LoadState make_load_state(const TriMesh& mesh, const LoadProgram& program, double t) {
  LoadState s;
  s.t = t;
  s.dirichlet_nodes = boundary_nodes(mesh, BoundaryTag::dirichlet);
  const double sg = program.dirichlet_profile.value(t);
  const double rg = program.dirichlet_profile.rate(t);
  const auto& A = program.dirichlet_gradient;
  const Point& c = program.dirichlet_offset;
  s.dirichlet_values.reserve(2 * s.dirichlet_nodes.size());
  s.dirichlet_rates.reserve(2 * s.dirichlet_nodes.size());
  for (int n : s.dirichlet_nodes) {
    const Point& p = mesh.nodes[static_cast<std::size_t>(n)];
    const double gx = A[0] * p.x + A[1] * p.y + c.x;
    const double gy = A[2] * p.x + A[3] * p.y + c.y;
    s.dirichlet_values.push_back(sg * gx);
    s.dirichlet_values.push_back(sg * gy);
    s.dirichlet_rates.push_back(rg * gx);
    s.dirichlet_rates.push_back(rg * gy);
  }

  const double sf = program.body_force_profile.value(t);
  const double rf = program.body_force_profile.rate(t);
  s.body_force.resize(2 * mesh.node_count());
  s.body_force_rates.resize(2 * mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    s.body_force[2 * i] = sf * program.body_force.x;
    s.body_force[2 * i + 1] = sf * program.body_force.y;
    s.body_force_rates[2 * i] = rf * program.body_force.x;
    s.body_force_rates[2 * i + 1] = rf * program.body_force.y;
  }

  const double sq = program.traction_profile.value(t);
  const double rq = program.traction_profile.rate(t);
  for (std::size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    if (mesh.boundary_edges[k].tag != BoundaryTag::neumann_loaded) continue;
    s.loaded_edges.push_back(static_cast<int>(k));
    s.traction.push_back(sq * program.traction.x);
    s.traction.push_back(sq * program.traction.y);
    s.traction_rates.push_back(rq * program.traction.x);
    s.traction_rates.push_back(rq * program.traction.y);
  }
  return s;
}

namespace {

using ElementMatrix = std::array<double, 36>;

ElementMatrix element_stiffness(const ElementGeometry& g, double lambda, double mu) {
  // Voigt B with engineering shear strain.
  double B[3][6] = {};
  for (int i = 0; i < 3; ++i) {
    B[0][2 * i] = g.dx[static_cast<std::size_t>(i)];
    B[1][2 * i + 1] = g.dy[static_cast<std::size_t>(i)];
    B[2][2 * i] = g.dy[static_cast<std::size_t>(i)];
    B[2][2 * i + 1] = g.dx[static_cast<std::size_t>(i)];
  }
  const double D[3][3] = {{lambda + 2 * mu, lambda, 0}, {lambda, lambda + 2 * mu, 0}, {0, 0, mu}};
  ElementMatrix K{};
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      double s = 0.0;
      for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) s += B[p][a] * D[p][q] * B[q][b];
      }
      K[static_cast<std::size_t>(6 * a + b)] = g.area * s;
    }
  }
  return K;
}

double degradation(const TriMesh& mesh, const NodalField& z, std::size_t e, double eta) {
  const auto& t = mesh.triangles[e];
  const double zbar = (z.values[static_cast<std::size_t>(t[0])] + z.values[static_cast<std::size_t>(t[1])] +
                       z.values[static_cast<std::size_t>(t[2])]) /
                      3.0;
  const double s = 1.0 - zbar;
  return s * s + eta;
}

std::array<int, 6> element_dofs(const Triangle& t) {
  return {2 * t[0], 2 * t[0] + 1, 2 * t[1], 2 * t[1] + 1, 2 * t[2], 2 * t[2] + 1};
}

double edge_length(const TriMesh& mesh, const BoundaryEdge& be) {
  const Point& a = mesh.nodes[static_cast<std::size_t>(be.nodes[0])];
  const Point& b = mesh.nodes[static_cast<std::size_t>(be.nodes[1])];
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

SparseMatrix assemble_stiffness(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat) {
  check_field(mesh, z, 1);
  const double lambda = mat.effective_lambda();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.triangle_count() * 36);
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto K = element_stiffness(element_geometry(mesh, e), lambda, mat.lame_mu);
    const double s = degradation(mesh, z, e, mat.residual_stiffness);
    const auto dofs = element_dofs(mesh.triangles[e]);
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        trips.emplace_back(dofs[static_cast<std::size_t>(a)], dofs[static_cast<std::size_t>(b)],
                           s * K[static_cast<std::size_t>(6 * a + b)]);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(2 * mesh.node_count());
  SparseMatrix K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

Eigen::VectorXd assemble_load_vector(const TriMesh& mesh, const LoadState& loads) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * mesh.node_count()));
  const auto mass = lumped_mass(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    b[static_cast<Eigen::Index>(2 * i)] += mass[i] * loads.body_force[2 * i];
    b[static_cast<Eigen::Index>(2 * i + 1)] += mass[i] * loads.body_force[2 * i + 1];
  }
  for (std::size_t k = 0; k < loads.loaded_edges.size(); ++k) {
    const auto& be = mesh.boundary_edges[static_cast<std::size_t>(loads.loaded_edges[k])];
    const double half = 0.5 * edge_length(mesh, be);
    for (int n : be.nodes) {
      b[2 * n] += half * loads.traction[2 * k];
      b[2 * n + 1] += half * loads.traction[2 * k + 1];
    }
  }
  return b;
}

namespace {

std::vector<double> dirichlet_dof_values(const TriMesh& mesh, const LoadState& loads, std::vector<char>& constrained) {
  std::vector<double> g(2 * mesh.node_count(), 0.0);
  constrained.assign(2 * mesh.node_count(), 0);
  for (std::size_t k = 0; k < loads.dirichlet_nodes.size(); ++k) {
    const auto n = static_cast<std::size_t>(loads.dirichlet_nodes[k]);
    g[2 * n] = loads.dirichlet_values[2 * k];
    g[2 * n + 1] = loads.dirichlet_values[2 * k + 1];
    constrained[2 * n] = constrained[2 * n + 1] = 1;
  }
  return g;
}

}  // namespace

LinearSystem assemble_damaged_system(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat,
                                     const LoadState& loads) {
  check_damage_field(mesh, z);
  const SparseMatrix K = assemble_stiffness(mesh, z, mat);
  const Eigen::VectorXd b = assemble_load_vector(mesh, loads);
  std::vector<char> constrained;
  const auto g = dirichlet_dof_values(mesh, loads, constrained);

  LinearSystem sys;
  sys.rhs = b;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(K.nonZeros()));
  for (Eigen::Index col = 0; col < K.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(it.col());
      if (!constrained[r] && !constrained[c]) {
        trips.emplace_back(it.row(), it.col(), it.value());
      } else if (!constrained[r] && constrained[c]) {
        sys.rhs[it.row()] -= it.value() * g[c];
      }
    }
  }
  for (std::size_t d = 0; d < constrained.size(); ++d) {
    if (constrained[d]) {
      trips.emplace_back(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d), 1.0);
      sys.rhs[static_cast<Eigen::Index>(d)] = g[d];
    }
  }
  sys.matrix.resize(K.rows(), K.cols());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

// ---------------------------------------------------------------------------
// DisplacementSolver

struct DisplacementSolver::Impl {
  const TriMesh* mesh;
  MaterialParams mat;
  double tol;
  std::vector<ElementMatrix> ke;
  std::vector<double> mass;
  std::vector<int> dirichlet_nodes;
  std::vector<char> constrained;
  std::vector<int> free_index;  // dof -> reduced index or -1
  std::vector<int> free_dofs;
  std::vector<int> positions;   // e*36 + a*6 + b -> value index or -1
  std::vector<int> diagonal;    // reduced index -> value index
  SparseMatrix A;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool analyzed = false;
  bool factored = false;
  bool reuse_factor = true;
  double last_residual = 0.0;

  Impl(const TriMesh& m, const MaterialParams& p, std::vector<int> dn, double t)
      : mesh(&m), mat(p), tol(t), dirichlet_nodes(std::move(dn)) {
    mat.validate();
    const double lambda = mat.effective_lambda();
    ke.reserve(m.triangle_count());
    for (std::size_t e = 0; e < m.triangle_count(); ++e) ke.push_back(element_stiffness(element_geometry(m, e), lambda, mat.lame_mu));
    mass = lumped_mass(m);

    const std::size_t ndof = 2 * m.node_count();
    constrained.assign(ndof, 0);
    for (int n : dirichlet_nodes) constrained[2 * static_cast<std::size_t>(n)] = constrained[2 * static_cast<std::size_t>(n) + 1] = 1;
    free_index.assign(ndof, -1);
    for (std::size_t d = 0; d < ndof; ++d) {
      if (!constrained[d]) {
        free_index[d] = static_cast<int>(free_dofs.size());
        free_dofs.push_back(static_cast<int>(d));
      }
    }

    const auto nf = static_cast<Eigen::Index>(free_dofs.size());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m.triangle_count() * 36);
    for (std::size_t e = 0; e < m.triangle_count(); ++e) {
      const auto dofs = element_dofs(m.triangles[e]);
      for (int a : dofs) {
        for (int b : dofs) {
          const int fa = free_index[static_cast<std::size_t>(a)];
          const int fb = free_index[static_cast<std::size_t>(b)];
          if (fa >= 0 && fb >= 0) trips.emplace_back(fa, fb, 1.0);
        }
      }
    }
    for (Eigen::Index i = 0; i < nf; ++i) trips.emplace_back(i, i, 0.0);
    A.resize(nf, nf);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    auto locate = [this](int r, int c) {
      const int* inner = A.innerIndexPtr();
      const int begin = A.outerIndexPtr()[c];
      const int end = A.outerIndexPtr()[c + 1];
      const int* it = std::lower_bound(inner + begin, inner + end, r);
      return static_cast<int>(it - inner);
    };
    positions.assign(m.triangle_count() * 36, -1);
    for (std::size_t e = 0; e < m.triangle_count(); ++e) {
      const auto dofs = element_dofs(m.triangles[e]);
      for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = 0; b < 6; ++b) {
          const int fa = free_index[static_cast<std::size_t>(dofs[a])];
          const int fb = free_index[static_cast<std::size_t>(dofs[b])];
          if (fa >= 0 && fb >= 0) positions[e * 36 + 6 * a + b] = locate(fa, fb);
        }
      }
    }
    diagonal.resize(free_dofs.size());
    for (std::size_t i = 0; i < free_dofs.size(); ++i) diagonal[i] = locate(static_cast<int>(i), static_cast<int>(i));
  }

  std::vector<double> prescribed(const LoadState& loads) const {
    if (loads.dirichlet_nodes != dirichlet_nodes) {
      throw std::invalid_argument("load state Dirichlet nodes differ from the solver's");
    }
    std::vector<double> g(constrained.size(), 0.0);
    for (std::size_t k = 0; k < dirichlet_nodes.size(); ++k) {
      const auto n = static_cast<std::size_t>(dirichlet_nodes[k]);
      g[2 * n] = loads.dirichlet_values[2 * k];
      g[2 * n + 1] = loads.dirichlet_values[2 * k + 1];
    }
    return g;
  }

  // Reduced matrix and right-hand side for damage z.
  Eigen::VectorXd assemble(const NodalField& z, const LoadState& loads, const std::vector<double>& g) {
    check_damage_field(*mesh, z);
    const TriMesh& m = *mesh;
    double* val = A.valuePtr();
    std::fill(val, val + A.nonZeros(), 0.0);
    const Eigen::VectorXd b = assemble_load_vector(m, loads);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(free_dofs.size()));
    for (std::size_t i = 0; i < free_dofs.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = b[free_dofs[i]];

    for (std::size_t e = 0; e < m.triangle_count(); ++e) {
      const double s = degradation(m, z, e, mat.residual_stiffness);
      const auto& K = ke[e];
      const auto dofs = element_dofs(m.triangles[e]);
      const int* pos = &positions[e * 36];
      for (std::size_t a = 0; a < 6; ++a) {
        const int fa = free_index[static_cast<std::size_t>(dofs[a])];
        if (fa < 0) continue;
        for (std::size_t b = 0; b < 6; ++b) {
          const int p = pos[6 * a + b];
          if (p >= 0) {
            val[p] += s * K[6 * a + b];
          } else {
            rhs[fa] -= s * K[6 * a + b] * g[static_cast<std::size_t>(dofs[b])];
          }
        }
      }
    }
    return rhs;
  }

  // Conjugate gradients preconditioned by the factor of an earlier matrix. Within
  // a step, and between nearby steps, K(z) changes little, so a few iterations
  // replace a fresh factorization. Returns false if the budget runs out.
  bool stale_factor_solve(const Eigen::VectorXd& rhs, double bnorm, Eigen::VectorXd& x) {
    constexpr int kMaxIterations = 12;
    x = ldlt.solve(rhs);
    Eigen::VectorXd r = rhs - A * x;
    double rel = r.norm() / bnorm;
    if (rel <= tol) {
      last_residual = rel;
      return true;
    }
    Eigen::VectorXd zr = ldlt.solve(r);
    Eigen::VectorXd p = zr;
    double rz = r.dot(zr);
    for (int it = 0; it < kMaxIterations; ++it) {
      const Eigen::VectorXd ap = A * p;
      const double step = rz / p.dot(ap);
      x += step * p;
      r -= step * ap;
      rel = r.norm() / bnorm;
      if (rel <= tol) {
        // Confirm with the true residual, which the recurrence can drift from.
        rel = (rhs - A * x).norm() / bnorm;
        if (rel <= tol) {
          last_residual = rel;
          return true;
        }
        return false;
      }
      zr = ldlt.solve(r);
      const double rz_next = r.dot(zr);
      p = zr + (rz_next / rz) * p;
      rz = rz_next;
    }
    return false;
  }

  Eigen::VectorXd factor_and_solve(const Eigen::VectorXd& rhs) {
    const double norm = rhs.norm();
    if (norm == 0.0) {
      last_residual = 0.0;
      return Eigen::VectorXd::Zero(rhs.size());
    }
    if (reuse_factor && factored) {
      Eigen::VectorXd x;
      if (stale_factor_solve(rhs, norm, x)) return x;
    }
    if (!analyzed) {
      ldlt.analyzePattern(A);
      analyzed = true;
    }
    ldlt.factorize(A);
    if (ldlt.info() != Eigen::Success) {
      factored = false;
      throw SolverError("displacement factorization failed", -1.0);
    }
    factored = true;
    Eigen::VectorXd x = ldlt.solve(rhs);
    const double bnorm = norm;
    double rel = (A.selfadjointView<Eigen::Lower>() * x - rhs).norm() / bnorm;
    for (int it = 0; it < 4 && rel > tol; ++it) {
      const Eigen::VectorXd r = rhs - A.selfadjointView<Eigen::Lower>() * x;
      x += ldlt.solve(r);
      rel = (A.selfadjointView<Eigen::Lower>() * x - rhs).norm() / bnorm;
    }
    last_residual = rel;
    if (!(rel <= tol)) throw SolverError("displacement solve missed residual tolerance", rel);
    return x;
  }

  NodalField expand(const Eigen::VectorXd& x, const std::vector<double>& g) const {
    NodalField u = NodalField::vector(mesh->node_count());
    for (std::size_t d = 0; d < constrained.size(); ++d) {
      const int f = free_index[d];
      u.values[d] = f >= 0 ? x[f] : g[d];
    }
    return u;
  }
};

DisplacementSolver::DisplacementSolver(const TriMesh& mesh, const MaterialParams& mat, std::vector<int> dirichlet_nodes,
                                       double residual_tolerance)
    : impl_(std::make_unique<Impl>(mesh, mat, std::move(dirichlet_nodes), residual_tolerance)) {}

DisplacementSolver::~DisplacementSolver() = default;
DisplacementSolver::DisplacementSolver(DisplacementSolver&&) noexcept = default;
DisplacementSolver& DisplacementSolver::operator=(DisplacementSolver&&) noexcept = default;

NodalField DisplacementSolver::solve(const NodalField& z, const LoadState& loads) {
  const auto g = impl_->prescribed(loads);
  const Eigen::VectorXd rhs = impl_->assemble(z, loads, g);
  return impl_->expand(impl_->factor_and_solve(rhs), g);
}

NodalField DisplacementSolver::relaxed_step(const NodalField& u_prev, double dt, const NodalField& z,
                                            const LoadState& loads) {
  const double alpha_u = impl_->mat.friction_alpha_u;
  if (!(alpha_u > 0.0)) throw DomainError("relaxed displacement step requires friction_alpha_u > 0");
  if (!(dt > 0.0)) throw DomainError("relaxed displacement step requires dt > 0");
  check_field(*impl_->mesh, u_prev, 2);
  const auto g = impl_->prescribed(loads);
  Eigen::VectorXd rhs = impl_->assemble(z, loads, g);
  double* val = impl_->A.valuePtr();
  for (std::size_t i = 0; i < impl_->free_dofs.size(); ++i) {
    const auto d = static_cast<std::size_t>(impl_->free_dofs[i]);
    const double c = alpha_u * impl_->mass[d / 2] / dt;
    val[impl_->diagonal[i]] += c;
    rhs[static_cast<Eigen::Index>(i)] += c * u_prev.values[d];
  }
  return impl_->expand(impl_->factor_and_solve(rhs), g);
}

Eigen::VectorXd DisplacementSolver::reactions(const NodalField& u, const NodalField& z, const LoadState& loads) const {
  const TriMesh& m = *impl_->mesh;
  check_field(m, u, 2);
  check_field(m, z, 1);
  Eigen::VectorXd r = -assemble_load_vector(m, loads);
  for (std::size_t e = 0; e < m.triangle_count(); ++e) {
    const double s = degradation(m, z, e, impl_->mat.residual_stiffness);
    const auto& K = impl_->ke[e];
    const auto dofs = element_dofs(m.triangles[e]);
    for (std::size_t a = 0; a < 6; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < 6; ++b) acc += K[6 * a + b] * u.values[static_cast<std::size_t>(dofs[b])];
      r[dofs[a]] += s * acc;
    }
  }
  return r;
}

double DisplacementSolver::last_residual() const noexcept { return impl_->last_residual; }

// ---------------------------------------------------------------------------
// Free functions

NodalField solve_displacement(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat,
                              const LoadState& loads, double residual_tolerance) {
  DisplacementSolver solver(mesh, mat, loads.dirichlet_nodes, residual_tolerance);
  return solver.solve(z, loads);
}

NodalField relaxed_displacement_step(const NodalField& u_prev, double dt, const TriMesh& mesh, const NodalField& z,
                                     const MaterialParams& mat, const LoadState& loads, double residual_tolerance) {
  DisplacementSolver solver(mesh, mat, loads.dirichlet_nodes, residual_tolerance);
  return solver.relaxed_step(u_prev, dt, z, loads);
}

ElementField energy_density(const TriMesh& mesh, const NodalField& u, const MaterialParams& mat) {
  check_field(mesh, u, 2);
  const double lambda = mat.effective_lambda();
  const double mu = mat.lame_mu;
  ElementField w(mesh.triangle_count());
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    const auto g = element_geometry(mesh, e);
    const auto& t = mesh.triangles[e];
    double exx = 0.0, eyy = 0.0, gxy = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto n = static_cast<std::size_t>(t[i]);
      const double ux = u.values[2 * n];
      const double uy = u.values[2 * n + 1];
      exx += g.dx[i] * ux;
      eyy += g.dy[i] * uy;
      gxy += g.dy[i] * ux + g.dx[i] * uy;
    }
    const double tr = exx + eyy;
    w[e] = lambda * tr * tr + 2.0 * mu * (exx * exx + eyy * eyy + 0.5 * gxy * gxy);
  }
  return w;
}

namespace {

double external_work(const TriMesh& mesh, const NodalField& u, const std::vector<double>& body,
                     const std::vector<double>& traction, const LoadState& loads) {
  double work = 0.0;
  const auto mass = lumped_mass(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    work += mass[i] * (body[2 * i] * u.values[2 * i] + body[2 * i + 1] * u.values[2 * i + 1]);
  }
  for (std::size_t k = 0; k < loads.loaded_edges.size(); ++k) {
    const auto& be = mesh.boundary_edges[static_cast<std::size_t>(loads.loaded_edges[k])];
    const double half = 0.5 * edge_length(mesh, be);
    for (int n : be.nodes) {
      const auto nn = static_cast<std::size_t>(n);
      work += half * (traction[2 * k] * u.values[2 * nn] + traction[2 * k + 1] * u.values[2 * nn + 1]);
    }
  }
  return work;
}

}  // namespace

double elastic_energy(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                      const LoadState& loads) {
  check_field(mesh, z, 1);
  const ElementField w = energy_density(mesh, u, mat);
  double stored = 0.0;
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) {
    stored += degradation(mesh, z, e, mat.residual_stiffness) * w[e] * signed_area(mesh, e);
  }
  return 0.5 * stored - external_work(mesh, u, loads.body_force, loads.traction, loads);
}

Eigen::VectorXd reactions(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                          const LoadState& loads) {
  const SparseMatrix K = assemble_stiffness(mesh, z, mat);
  return K * u.as_vector() - assemble_load_vector(mesh, loads);
}

double power_input(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                   const LoadState& loads) {
  check_field(mesh, u, 2);
  double boundary = 0.0;
  bool moving = false;
  for (double r : loads.dirichlet_rates) moving = moving || r != 0.0;
  if (moving) {
    const Eigen::VectorXd R = reactions(mesh, u, z, mat, loads);
    for (std::size_t k = 0; k < loads.dirichlet_nodes.size(); ++k) {
      const auto n = static_cast<Eigen::Index>(loads.dirichlet_nodes[k]);
      boundary += loads.dirichlet_rates[2 * k] * R[2 * n] + loads.dirichlet_rates[2 * k + 1] * R[2 * n + 1];
    }
  }
  return boundary - external_work(mesh, u, loads.body_force_rates, loads.traction_rates, loads);
}

}  // namespace vfrac
