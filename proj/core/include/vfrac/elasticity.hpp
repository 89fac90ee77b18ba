#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "vfrac/config.hpp"
#include "vfrac/core.hpp"
#include "vfrac/mesh.hpp"

namespace vfrac {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Per-node values with 1 (z, w) or 2 (u) components, interleaved.
struct NodalField {
  std::size_t node_count = 0;
  int components = 1;
  std::vector<double> values;

  static NodalField scalar(std::size_t n, double fill = 0.0) { return {n, 1, std::vector<double>(n, fill)}; }
  static NodalField vector(std::size_t n, double fill = 0.0) { return {n, 2, std::vector<double>(2 * n, fill)}; }

  double& operator()(std::size_t node, int comp = 0) { return values[node * static_cast<std::size_t>(components) + static_cast<std::size_t>(comp)]; }
  double operator()(std::size_t node, int comp = 0) const { return values[node * static_cast<std::size_t>(components) + static_cast<std::size_t>(comp)]; }

  Eigen::Map<Eigen::VectorXd> as_vector() { return {values.data(), static_cast<Eigen::Index>(values.size())}; }
  Eigen::Map<const Eigen::VectorXd> as_vector() const { return {values.data(), static_cast<Eigen::Index>(values.size())}; }
};

/// One value per triangle (P1 strains are element-constant).
using ElementField = std::vector<double>;

/// Throws std::invalid_argument if `f` does not match the mesh or `components`.
void check_field(const TriMesh& mesh, const NodalField& f, int components);
/// Additionally requires 0 <= z <= 1 nodewise.
void check_damage_field(const TriMesh& mesh, const NodalField& z);

/// Loads evaluated at one instant: values and analytic time derivatives.
struct LoadState {
  double t = 0.0;
  std::vector<int> dirichlet_nodes;      ///< sorted
  std::vector<double> dirichlet_values;  ///< 2 per Dirichlet node
  std::vector<double> dirichlet_rates;   ///< d g / dt
  std::vector<double> body_force;        ///< 2 per mesh node
  std::vector<double> body_force_rates;
  std::vector<int> loaded_edges;         ///< indices into TriMesh::boundary_edges
  std::vector<double> traction;          ///< 2 per loaded edge
  std::vector<double> traction_rates;
};

LoadState make_load_state(const TriMesh& mesh, const LoadProgram& program, double t);

/// Unconstrained damaged stiffness: sum_e ((1 - zbar_e)^2 + eta) K_e.
SparseMatrix assemble_stiffness(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat);

/// Consistent load vector for body force (lumped) and tractions.
Eigen::VectorXd assemble_load_vector(const TriMesh& mesh, const LoadState& loads);

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Damaged system with Dirichlet rows and columns eliminated symmetrically
/// (unit diagonal, prescribed value on the right-hand side).
LinearSystem assemble_damaged_system(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat,
                                     const LoadState& loads);

NodalField solve_displacement(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat,
                              const LoadState& loads, double residual_tolerance = 1e-10);

/// w = sigma[u] : e[u] per element.
ElementField energy_density(const TriMesh& mesh, const NodalField& u, const MaterialParams& mat);

/// Damaged elastic energy including body-force and traction work.
double elastic_energy(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                      const LoadState& loads);

/// Residual K(z) u - b of the unconstrained system (nonzero only on Dirichlet dofs at equilibrium).
Eigen::VectorXd reactions(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                          const LoadState& loads);

/// Rate of external work: reactions . dg/dt - df/dt . u - dq/dt . u.
double power_input(const TriMesh& mesh, const NodalField& u, const NodalField& z, const MaterialParams& mat,
                   const LoadState& loads);

/// Backward-Euler step of alpha_u du/dt - div((1 - z)^2 sigma[u]) = f.
NodalField relaxed_displacement_step(const NodalField& u_prev, double dt, const TriMesh& mesh, const NodalField& z,
                                     const MaterialParams& mat, const LoadState& loads,
                                     double residual_tolerance = 1e-10);

/// Reusable displacement solver for a fixed mesh and material.
///
/// The sparsity pattern, element matrices and the symbolic factorization are
/// computed once; each solve only refactorizes numerically.
class DisplacementSolver {
 public:
  DisplacementSolver(const TriMesh& mesh, const MaterialParams& mat, std::vector<int> dirichlet_nodes,
                     double residual_tolerance = 1e-10);
  ~DisplacementSolver();
  DisplacementSolver(DisplacementSolver&&) noexcept;
  DisplacementSolver& operator=(DisplacementSolver&&) noexcept;

  /// Static equilibrium for damage z and loads.
  NodalField solve(const NodalField& z, const LoadState& loads);

  /// Friction-relaxed step; requires mat.friction_alpha_u > 0.
  NodalField relaxed_step(const NodalField& u_prev, double dt, const NodalField& z, const LoadState& loads);

  /// Reactions on every dof (2 per node) for a given state.
  Eigen::VectorXd reactions(const NodalField& u, const NodalField& z, const LoadState& loads) const;

  /// Last achieved relative residual.
  double last_residual() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vfrac
