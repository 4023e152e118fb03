#pragma once

#include <string>
#include <vector>

#include "convcool/forward.hpp"

namespace convcool {

enum class Phase { picard, newton };

/// Per-iteration diagnostics. cost = variance_term + control_term exactly
/// as stored; relative_change is NaN on the initial record.
struct IterationRecord {
  Phase phase = Phase::picard;
  int index = 0;
  double cost = 0.0;
  double variance_term = 0.0;   // |T - <T>|^2 / 2
  double control_term = 0.0;    // gamma |grad v|^2 / 2
  double relative_change = 0.0;
  double nonlinear_residual = 0.0;
};

struct CostBreakdown {
  double total = 0.0;
  double variance_term = 0.0;
  double control_term = 0.0;
};

/// Stopping tolerances and iteration caps for the two solver phases.
struct AlgorithmOptions {
  double gamma = 1.0;
  double eps1 = 1e-3;
  double eps2 = 1e-8;
  int max_picard = 20;
  int max_newton = 20;
};

/// Self-contained run description (builds its own Problem).
struct AlgorithmConfig {
  int subdivisions = 64;
  double kappa = 1.0;
  double gamma = 1.0;
  double eps1 = 1e-3;
  double eps2 = 1e-8;
  int max_picard = 20;
  int max_newton = 20;
  bool skew_convection = false;
};

struct RunResult {
  OptState state;
  std::vector<IterationRecord> history;
  bool converged = false;
  bool solver_failed = false;
  std::string failure_message;
};

CostBreakdown cost(const Problem& problem, const OptState& state);

/// One Picard sweep: state, adjoint, then Stokes, each at the previous
/// velocity linearization.
OptState picard_step(const Problem& problem, const OptState& state);

/// One monolithic Newton step on the coupled optimality system; expects a
/// Picard-warmed state. Throws SolverFailure on a singular Newton matrix.
OptState newton_step(const Problem& problem, const OptState& state);

/// Initial guess, Picard phase to eps1/max_picard, Newton phase to
/// eps2/max_newton. On solver failure the result carries the history so
/// far with solver_failed set; on non-convergence the best iterate is
/// returned unconverged.
RunResult run_algorithm(const Problem& problem, const AlgorithmOptions& options);
RunResult run_algorithm(const AlgorithmConfig& config, const SourceTerm& source);

/// Directional derivative of the reduced cost: -(q, h . grad T) + gamma
/// (grad v, grad h).
double gradient_action(const Problem& problem, const OptState& state, const VectorField& h);

/// Quadratic form of the reduced Hessian: |Dz|^2 + 2 (z, h . grad q) +
/// gamma |grad h|^2 with z the linearized state in direction h.
double hessian_quadratic(const Problem& problem, const OptState& state, const VectorField& h);

/// Weak residual norms of the three optimality-system rows, interior test
/// functions only.
struct ResidualNorms {
  double state = 0.0;
  double adjoint = 0.0;
  double stokes = 0.0;
  double total() const;
};
ResidualNorms optimality_residual(const Problem& problem, const OptState& state);

/// Discretely divergence-free, boundary-zero direction with unit gradient
/// norm, generated by a Stokes solve with seeded random smooth forcing.
VectorField divergence_free_direction(const Problem& problem, unsigned seed);

}  // namespace convcool
