#pragma once

#include <memory>
#include <vector>

#include "vfrac/core.hpp"
#include "vfrac/elasticity.hpp"
#include "vfrac/mesh.hpp"

namespace vfrac {

/// Ambrosio-Tortorelli surface energy 1/2 G_c (eps z^T K z + sum_i M_i z_i^2 / eps).
double surface_energy(const TriMesh& mesh, const NodalField& z, const MaterialParams& mat);

/// Nodes where z is pinned to zero (those on neumann_loaded edges).
std::vector<char> damage_pinned_nodes(const TriMesh& mesh);

/// Area-weighted nodal average of an element field.
NodalField project_to_nodes(const TriMesh& mesh, const ElementField& w);

/// -dE_tot/dz divided by the lumped mass, for u frozen (w given per element).
///
/// The elastic part is the exact derivative of 1/2 sum_e (1 - zbar_e)^2 w_e A_e,
/// which reduces to P(w)(1 - z) for uniform z. Pinned nodes get 0.
NodalField driving_force(const TriMesh& mesh, const NodalField& z, const ElementField& w, const MaterialParams& mat);

/// dt <= alpha eps / (2 max w) for proportional rate laws; +inf when w == 0 or
/// the law has no single coefficient.
double stable_time_step(const ElementField& w, const MaterialParams& mat);

struct PhaseFieldOptions {
  /// Re-solve with bound-active nodes held fixed until the active set settles,
  /// so free nodes see the values actually kept at their clipped neighbours.
  /// Off: a single solve followed by max(zhat, z_old) and the clamp to 1.
  bool active_set = true;
  int max_active_set_iterations = 50;
};

struct PhaseFieldStepInfo {
  int iterations = 0;     ///< rate-law iterations (1 for proportional laws)
  int linear_solves = 0;
  bool active_set_converged = true;
  double stable_dt = 0.0; ///< stable_time_step at this w
  bool stability_ok = true;
  double increment = 0.0; ///< final max |z^{k+1} - z^k| of the rate iteration
};

/// Reusable phase-field stepper for a fixed mesh and material.
///
/// Every step solves
///   (S/dt M + G_c eps K + G_c/eps M + B_w) zhat = S/dt M z_old + c_w + (rate-law correction)
/// subject to z_old <= z_new <= 1 (see PhaseFieldOptions), i.e. z_new = min(max(zhat, z_old), 1)
/// with zhat consistent with the kept bound values. S is alpha for linear laws; for
/// nonlinear laws it is a per-node tangent (convex) or secant (concave) slope
/// of alpha*, updated until max |dz| <= 1e-8 (at most 100 iterations).
class PhaseFieldSolver {
 public:
  PhaseFieldSolver(const TriMesh& mesh, const MaterialParams& mat, PhaseFieldOptions options = {});
  ~PhaseFieldSolver();
  PhaseFieldSolver(PhaseFieldSolver&&) noexcept;
  PhaseFieldSolver& operator=(PhaseFieldSolver&&) noexcept;

  /// Throws SolverError when the rate iteration does not converge.
  NodalField step(const NodalField& z_old, const ElementField& w, double dt, PhaseFieldStepInfo* info = nullptr);

  /// Trapezoidal variant: the energy gradient is averaged between (z_old, w_old)
  /// and (z_new, w_new), with z_new implicit:
  ///   S M (z_new - z_old)/dt = -1/2 (grad E(z_old; w_old) + grad E(z_new; w_new)).
  /// Bounds and rate-law handling are as in step. With w_new = w(u*(z_new)) the
  /// discrete energy balance holds to second order in dt.
  NodalField step_trapezoidal(const NodalField& z_old, const ElementField& w_old, const ElementField& w_new, double dt,
                              PhaseFieldStepInfo* info = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

NodalField step_phase_field(const TriMesh& mesh, const NodalField& z_old, const ElementField& w, double dt,
                            const MaterialParams& mat, PhaseFieldStepInfo* info = nullptr,
                            PhaseFieldOptions options = {});

}  // namespace vfrac
