#pragma once

#include <memory>
#include <utility>

#include "convcool/assembly.hpp"
#include "convcool/linsolve.hpp"
#include "convcool/mesh.hpp"
#include "convcool/sources.hpp"

namespace convcool {

/// One iterate of the optimality system. Temperature and adjoint vanish on
/// the Dirichlet DOFs, the velocity on the boundary nodes, and the
/// pressure has zero mean.
struct OptState {
  ScalarField temperature;
  ScalarField adjoint;
  VectorField velocity;
  PressureField pressure;
  double kappa = 1.0;
  double gamma = 1.0;
};

/// Immutable per-discretization bundle: mesh, DOF maps, the constant
/// operators, and the heat source. Safe to share read-only across
/// concurrent solves.
class Problem {
 public:
  Problem(int subdivisions, double kappa, SourceTerm source, bool skew_convection = false);

  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofmap() const { return dofmap_; }
  double kappa() const { return kappa_; }
  const SourceTerm& source() const { return source_; }
  bool skew_convection() const { return skew_; }

  const SparseOperator& stiffness() const { return stiffness_; }          // kappa-scaled
  const SparseOperator& mass_p2() const { return mass_p2_; }
  const SparseOperator& mass_p1() const { return mass_p1_; }
  const SparseOperator& vector_laplacian_unit() const { return laplacian1_; }  // gamma = 1
  const SparseOperator& divergence() const { return divergence_; }
  const Eigen::VectorXd& load() const { return load_; }
  const Eigen::VectorXd& pressure_constraint_row() const { return constraint_row_; }

  /// M_p1-weighted norm of the weak divergence of v (L2 norm of its P1
  /// Riesz representative).
  double weak_divergence_norm(const VectorField& v) const;

 private:
  Mesh mesh_;
  DofMap dofmap_;
  double kappa_;
  SourceTerm source_;
  bool skew_;
  SparseOperator stiffness_, mass_p2_, mass_p1_, laplacian1_, divergence_;
  Eigen::VectorXd load_;
  Eigen::VectorXd constraint_row_;
  std::shared_ptr<DirectSolver> mass_p1_solver_;
};

/// Temperature from the advection-diffusion state equation at a fixed
/// divergence-free velocity (warns when v is not discretely div-free).
ScalarField solve_state(const Problem& problem, const VectorField& v);

/// Adjoint from the transposed-convection equation with right-hand side
/// T - <T>.
ScalarField solve_adjoint(const Problem& problem, const VectorField& v, const ScalarField& T);

/// Directional derivative z of the temperature with respect to the
/// velocity, in the direction h.
ScalarField solve_linearized_state(const Problem& problem, const VectorField& v,
                                   const ScalarField& T, const VectorField& h);

/// Stokes problem forced by the coupling (q grad T, w).
std::pair<VectorField, PressureField> solve_stokes(const Problem& problem, const ScalarField& q,
                                                   const ScalarField& T, double gamma);

/// Zero velocity and pressure; temperature and adjoint from pure-diffusion
/// solves.
OptState initial_guess(const Problem& problem, double gamma);

}  // namespace convcool
