#include "convcool/forward.hpp"

#include <cmath>
#include <sstream>

#include "convcool/errors.hpp"

namespace convcool {

Problem::Problem(int subdivisions, double kappa, SourceTerm source, bool skew_convection)
    : mesh_(build_uniform_mesh(subdivisions)),
      dofmap_(build_dofmap(mesh_)),
      kappa_(kappa),
      source_(std::move(source)),
      skew_(skew_convection) {
  if (!(kappa > 0.0)) throw InvalidArgument("Problem: kappa must be positive");
  stiffness_ = assemble_stiffness(mesh_, dofmap_, kappa_);
  mass_p2_ = assemble_mass(mesh_, dofmap_, Space::P2);
  mass_p1_ = assemble_mass(mesh_, dofmap_, Space::P1);
  laplacian1_ = assemble_vector_laplacian(mesh_, dofmap_, 1.0);
  divergence_ = assemble_divergence(mesh_, dofmap_);
  load_ = assemble_load(mesh_, dofmap_, source_);
  constraint_row_ = mass_p1_.matrix * Eigen::VectorXd::Ones(dofmap_.p1_count);
  mass_p1_solver_ = std::make_shared<DirectSolver>(mass_p1_.matrix);
}

double Problem::weak_divergence_norm(const VectorField& v) const {
  Eigen::VectorXd moments = divergence_.matrix * v;
  Eigen::VectorXd riesz = mass_p1_solver_->solve(moments);
  return std::sqrt(std::abs(moments.dot(riesz)));
}

namespace {

void warn_if_not_divergence_free(const Problem& p, const VectorField& v, const char* where) {
  const double div = p.weak_divergence_norm(v);
  const double scale = 1.0 + std::sqrt(std::abs(v.dot(p.vector_laplacian_unit().matrix * v)));
  if (div > 1e-8 * scale) {
    std::ostringstream msg;
    msg << where << ": velocity is not discretely divergence-free (|div| = " << div << ")";
    warn(msg.str());
  }
}

}  // namespace

ScalarField solve_state(const Problem& p, const VectorField& v) {
  warn_if_not_divergence_free(p, v, "solve_state");
  LinearSystem system;
  system.matrix.matrix =
      p.stiffness().matrix + assemble_convection(p.mesh(), p.dofmap(), v, p.skew_convection()).matrix;
  system.rhs = p.load();
  system.dirichlet = &p.dofmap().p2_dirichlet;
  return solve_scalar(system);
}

ScalarField solve_adjoint(const Problem& p, const VectorField& v, const ScalarField& T) {
  LinearSystem system;
  system.matrix.matrix =
      p.stiffness().matrix - assemble_convection(p.mesh(), p.dofmap(), v, p.skew_convection()).matrix;
  system.rhs = p.mass_p2().matrix * apply_mean_deviation(p.mass_p2(), T);
  system.dirichlet = &p.dofmap().p2_dirichlet;
  return solve_scalar(system);
}

ScalarField solve_linearized_state(const Problem& p, const VectorField& v, const ScalarField& T,
                                   const VectorField& h) {
  warn_if_not_divergence_free(p, h, "solve_linearized_state");
  LinearSystem system;
  system.matrix.matrix =
      p.stiffness().matrix + assemble_convection(p.mesh(), p.dofmap(), v, p.skew_convection()).matrix;
  system.rhs = -(assemble_convection(p.mesh(), p.dofmap(), h, p.skew_convection()).matrix * T);
  system.dirichlet = &p.dofmap().p2_dirichlet;
  return solve_scalar(system);
}

std::pair<VectorField, PressureField> solve_stokes(const Problem& p, const ScalarField& q,
                                                   const ScalarField& T, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("solve_stokes: gamma must be positive");
  SparseOperator scaled;
  scaled.matrix = gamma * p.vector_laplacian_unit().matrix;
  scaled.symmetric = true;
  SaddleSystem system;
  system.velocity_block = &scaled;
  system.divergence_block = &p.divergence();
  system.velocity_rhs = assemble_coupling(p.mesh(), p.dofmap(), q, T);
  system.pressure_constraint_row = p.pressure_constraint_row();
  system.velocity_dirichlet = &p.dofmap().velocity_dirichlet;
  return solve_saddle(system);
}

OptState initial_guess(const Problem& p, double gamma) {
  OptState state;
  state.kappa = p.kappa();
  state.gamma = gamma;
  state.velocity = VectorField::Zero(p.dofmap().velocity_count);
  state.pressure = PressureField::Zero(p.dofmap().p1_count);

  LinearSystem heat;
  heat.matrix = p.stiffness();
  heat.rhs = p.load();
  heat.dirichlet = &p.dofmap().p2_dirichlet;
  state.temperature = solve_scalar(heat);

  LinearSystem adjoint;
  adjoint.matrix = p.stiffness();
  adjoint.rhs = p.mass_p2().matrix * apply_mean_deviation(p.mass_p2(), state.temperature);
  adjoint.dirichlet = &p.dofmap().p2_dirichlet;
  state.adjoint = solve_scalar(adjoint);
  return state;
}

}  // namespace convcool
