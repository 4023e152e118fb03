#include "convcool/optimizer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "convcool/errors.hpp"

namespace convcool {

CostBreakdown cost(const Problem& p, const OptState& state) {
  CostBreakdown out;
  const ScalarField deviation = apply_mean_deviation(p.mass_p2(), state.temperature);
  out.variance_term = 0.5 * deviation.dot(p.mass_p2().matrix * deviation);
  out.control_term =
      0.5 * state.gamma * state.velocity.dot(p.vector_laplacian_unit().matrix * state.velocity);
  out.total = out.variance_term + out.control_term;
  return out;
}

OptState picard_step(const Problem& p, const OptState& state) {
  OptState next;
  next.kappa = state.kappa;
  next.gamma = state.gamma;
  next.temperature = solve_state(p, state.velocity);
  next.adjoint = solve_adjoint(p, state.velocity, next.temperature);
  std::tie(next.velocity, next.pressure) =
      solve_stokes(p, next.adjoint, next.temperature, state.gamma);
  return next;
}

OptState newton_step(const Problem& p, const OptState& state) {
  const auto& dm = p.dofmap();
  const int n2 = dm.p2_count;
  const int nu = dm.velocity_count;
  const int n1 = dm.p1_count;
  const int oT = 0, oq = n2, ov = 2 * n2, op = 2 * n2 + nu;
  const int o_lambda = op + n1;  // pressure-mean multiplier
  const int o_mu = o_lambda + 1; // mean-temperature unknown
  const int total = o_mu + 1;

  const bool skew = p.skew_convection();
  const auto convection = assemble_convection(p.mesh(), p.dofmap(), state.velocity, skew);
  const auto advect_T = assemble_advection_of(p.mesh(), p.dofmap(), state.temperature, skew);
  const auto advect_q = assemble_advection_of(p.mesh(), p.dofmap(), state.adjoint, skew);
  const auto grad_coupling_q = assemble_gradient_coupling(p.mesh(), p.dofmap(), state.adjoint);
  const Eigen::VectorXd mass_ones = p.mass_p2().matrix * Eigen::VectorXd::Ones(n2);

  const std::vector<bool>& fix_s = dm.p2_dirichlet;
  const std::vector<bool>& fix_v = dm.velocity_dirichlet;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(size_t(p.stiffness().matrix.nonZeros()) * 4 +
                   size_t(advect_T.matrix.nonZeros()) * 3 + 4 * n2 + 2 * n1 + nu);

  auto add_block = [&](const Eigen::SparseMatrix<double, Eigen::RowMajor>& m, int row_off,
                       int col_off, double scale, const std::vector<bool>* row_fix,
                       const std::vector<bool>* col_fix, bool transpose = false) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, k); it; ++it) {
        const int r = transpose ? int(it.col()) : int(it.row());
        const int c = transpose ? int(it.row()) : int(it.col());
        if (row_fix && (*row_fix)[r]) continue;
        if (col_fix && (*col_fix)[c]) continue;
        triplets.emplace_back(row_off + r, col_off + c, scale * it.value());
      }
  };

  // State row: A T + C(v^k) T + C(.; T^k) v = f + C(v^k) T^k.
  add_block(p.stiffness().matrix, oT, oT, 1.0, &fix_s, &fix_s);
  add_block(convection.matrix, oT, oT, 1.0, &fix_s, &fix_s);
  add_block(advect_T.matrix, oT, ov, 1.0, &fix_s, &fix_v);

  // Adjoint row: A q - C(v^k) q - C(.; q^k) v - M T + m mu = -C(v^k) q^k.
  add_block(p.stiffness().matrix, oq, oq, 1.0, &fix_s, &fix_s);
  add_block(convection.matrix, oq, oq, -1.0, &fix_s, &fix_s);
  add_block(advect_q.matrix, oq, ov, -1.0, &fix_s, &fix_v);
  add_block(p.mass_p2().matrix, oq, oT, -1.0, &fix_s, &fix_s);
  for (int i = 0; i < n2; ++i)
    if (!fix_s[i]) triplets.emplace_back(oq + i, o_mu, mass_ones[i]);

  // Momentum row: gamma D v - B^T p - (q^k grad .) T - (. grad T^k) q = -(q^k grad T^k).
  add_block(p.vector_laplacian_unit().matrix, ov, ov, state.gamma, &fix_v, &fix_v);
  add_block(p.divergence().matrix, ov, op, -1.0, &fix_v, nullptr, /*transpose=*/true);
  add_block(grad_coupling_q.matrix, ov, oT, -1.0, &fix_v, &fix_s);
  add_block(advect_T.matrix, ov, oq, -1.0, &fix_v, &fix_s, /*transpose=*/true);

  // Continuity row plus the two scalar constraints.
  add_block(p.divergence().matrix, op, ov, 1.0, nullptr, &fix_v);
  for (int i = 0; i < n1; ++i) {
    const double c = p.pressure_constraint_row()[i];
    triplets.emplace_back(op + i, o_lambda, c);
    triplets.emplace_back(o_lambda, op + i, c);
  }
  // mu - <T> = 0.
  triplets.emplace_back(o_mu, o_mu, 1.0);
  for (int i = 0; i < n2; ++i) triplets.emplace_back(o_mu, oT + i, -mass_ones[i]);

  // Dirichlet identities.
  for (int i = 0; i < n2; ++i)
    if (fix_s[i]) {
      triplets.emplace_back(oT + i, oT + i, 1.0);
      triplets.emplace_back(oq + i, oq + i, 1.0);
    }
  for (int i = 0; i < nu; ++i)
    if (fix_v[i]) triplets.emplace_back(ov + i, ov + i, 1.0);

  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix(total, total);
  matrix.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total);
  const Eigen::VectorXd state_rhs = p.load() + convection.matrix * state.temperature;
  const Eigen::VectorXd adjoint_rhs = -(convection.matrix * state.adjoint);
  const Eigen::VectorXd momentum_rhs =
      -assemble_coupling(p.mesh(), p.dofmap(), state.adjoint, state.temperature);
  for (int i = 0; i < n2; ++i) {
    if (fix_s[i]) continue;
    rhs[oT + i] = state_rhs[i];
    rhs[oq + i] = adjoint_rhs[i];
  }
  for (int i = 0; i < nu; ++i)
    if (!fix_v[i]) rhs[ov + i] = momentum_rhs[i];

  DirectSolver solver(matrix);
  const Eigen::VectorXd sol = solver.solve(rhs);

  OptState next;
  next.kappa = state.kappa;
  next.gamma = state.gamma;
  next.temperature = sol.segment(oT, n2);
  next.adjoint = sol.segment(oq, n2);
  next.velocity = sol.segment(ov, nu);
  next.pressure = sol.segment(op, n1);
  for (int i = 0; i < n2; ++i)
    if (fix_s[i]) {
      next.temperature[i] = 0.0;
      next.adjoint[i] = 0.0;
    }
  for (int i = 0; i < nu; ++i)
    if (fix_v[i]) next.velocity[i] = 0.0;
  return next;
}

ResidualNorms optimality_residual(const Problem& p, const OptState& state) {
  const auto& dm = p.dofmap();
  const auto convection =
      assemble_convection(p.mesh(), p.dofmap(), state.velocity, p.skew_convection());
  const ScalarField deviation = apply_mean_deviation(p.mass_p2(), state.temperature);

  Eigen::VectorXd r_state =
      p.stiffness().matrix * state.temperature + convection.matrix * state.temperature - p.load();
  Eigen::VectorXd r_adjoint = p.stiffness().matrix * state.adjoint -
                              convection.matrix * state.adjoint -
                              p.mass_p2().matrix * deviation;
  for (int i = 0; i < dm.p2_count; ++i)
    if (dm.p2_dirichlet[i]) {
      r_state[i] = 0.0;
      r_adjoint[i] = 0.0;
    }

  Eigen::VectorXd r_momentum =
      state.gamma * (p.vector_laplacian_unit().matrix * state.velocity) -
      p.divergence().matrix.transpose() * state.pressure -
      assemble_coupling(p.mesh(), p.dofmap(), state.adjoint, state.temperature);
  for (int i = 0; i < dm.velocity_count; ++i)
    if (dm.velocity_dirichlet[i]) r_momentum[i] = 0.0;
  const Eigen::VectorXd r_div = p.divergence().matrix * state.velocity;

  ResidualNorms norms;
  norms.state = r_state.norm();
  norms.adjoint = r_adjoint.norm();
  norms.stokes = std::sqrt(r_momentum.squaredNorm() + r_div.squaredNorm());
  return norms;
}

double ResidualNorms::total() const {
  return std::sqrt(state * state + adjoint * adjoint + stokes * stokes);
}

namespace {

IterationRecord make_record(const Problem& p, const OptState& state, Phase phase, int index,
                            double previous_cost, bool initial) {
  IterationRecord rec;
  rec.phase = phase;
  rec.index = index;
  const CostBreakdown c = cost(p, state);
  rec.cost = c.total;
  rec.variance_term = c.variance_term;
  rec.control_term = c.control_term;
  if (initial)
    rec.relative_change = std::numeric_limits<double>::quiet_NaN();
  else if (previous_cost < 1e-14)
    rec.relative_change = std::abs(rec.cost - previous_cost);
  else
    rec.relative_change = std::abs(rec.cost - previous_cost) / previous_cost;
  rec.nonlinear_residual = optimality_residual(p, state).total();
  return rec;
}

}  // namespace

RunResult run_algorithm(const Problem& p, const AlgorithmOptions& options) {
  if (!(options.gamma > 0.0)) throw InvalidArgument("run_algorithm: gamma must be positive");
  if (!(options.eps1 > 0.0) || !(options.eps2 > 0.0))
    throw InvalidArgument("run_algorithm: tolerances must be positive");
  if (options.max_picard < 0 || options.max_newton < 0)
    throw InvalidArgument("run_algorithm: iteration limits must be nonnegative");

  RunResult result;
  result.state = initial_guess(p, options.gamma);
  result.history.push_back(make_record(p, result.state, Phase::picard, 0, 0.0, true));

  // A vanishing initial cost means f = 0 up to rounding and the zero state
  // already solves the optimality system.
  if (result.history.front().cost < 1e-14) {
    result.converged = true;
    return result;
  }

  OptState best_state = result.state;
  double best_cost = result.history.front().cost;
  double previous = best_cost;

  auto track_best = [&](const OptState& s, double c) {
    if (c < best_cost) {
      best_cost = c;
      best_state = s;
    }
  };

  bool phase_converged = false;
  try {
    for (int k = 1; k <= options.max_picard; ++k) {
      result.state = picard_step(p, result.state);
      auto rec = make_record(p, result.state, Phase::picard, k, previous, false);
      result.history.push_back(rec);
      previous = rec.cost;
      track_best(result.state, rec.cost);
      if (rec.relative_change < options.eps1) {
        phase_converged = true;
        break;
      }
    }
    if (options.max_newton == 0) {
      result.converged = phase_converged;
    } else {
      for (int k = 1; k <= options.max_newton; ++k) {
        result.state = newton_step(p, result.state);
        auto rec = make_record(p, result.state, Phase::newton, k, previous, false);
        result.history.push_back(rec);
        previous = rec.cost;
        track_best(result.state, rec.cost);
        if (rec.relative_change < options.eps2) {
          result.converged = true;
          break;
        }
      }
    }
  } catch (const SolverFailure& failure) {
    result.solver_failed = true;
    result.failure_message = failure.what();
    result.state = best_state;
    return result;
  }

  if (!result.converged) result.state = best_state;
  return result;
}

RunResult run_algorithm(const AlgorithmConfig& config, const SourceTerm& source) {
  Problem problem(config.subdivisions, config.kappa, source, config.skew_convection);
  AlgorithmOptions options;
  options.gamma = config.gamma;
  options.eps1 = config.eps1;
  options.eps2 = config.eps2;
  options.max_picard = config.max_picard;
  options.max_newton = config.max_newton;
  return run_algorithm(problem, options);
}

double gradient_action(const Problem& p, const OptState& state, const VectorField& h) {
  const Eigen::VectorXd coupling =
      assemble_coupling(p.mesh(), p.dofmap(), state.adjoint, state.temperature);
  return -coupling.dot(h) +
         state.gamma * h.dot(p.vector_laplacian_unit().matrix * state.velocity);
}

double hessian_quadratic(const Problem& p, const OptState& state, const VectorField& h) {
  const ScalarField z = solve_linearized_state(p, state.velocity, state.temperature, h);
  const ScalarField dz = apply_mean_deviation(p.mass_p2(), z);
  const auto advect_h = assemble_convection(p.mesh(), p.dofmap(), h, false);
  return dz.dot(p.mass_p2().matrix * dz) + 2.0 * z.dot(advect_h.matrix * state.adjoint) +
         state.gamma * h.dot(p.vector_laplacian_unit().matrix * h);
}

VectorField divergence_free_direction(const Problem& p, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::array<double, 8> ax{}, ay{};
  for (auto& a : ax) a = uniform(rng);
  for (auto& a : ay) a = uniform(rng);
  auto component = [](const std::array<double, 8>& a) {
    return [a](double x, double y) {
      const double pi = M_PI;
      double value = 0.0;
      int i = 0;
      for (int kx = 1; kx <= 2; ++kx)
        for (int ky = 1; ky <= 2; ++ky) {
          value += a[i] * std::sin(kx * pi * x) * std::sin(ky * pi * y);
          value += a[i + 4] * std::sin(kx * pi * x) * std::cos(ky * pi * y);
          ++i;
        }
      return value;
    };
  };
  const Eigen::VectorXd forcing =
      assemble_vector_load(p.mesh(), p.dofmap(), component(ax), component(ay));

  SparseOperator unit_block;
  unit_block.matrix = p.vector_laplacian_unit().matrix;
  unit_block.symmetric = true;
  SaddleSystem system;
  system.velocity_block = &unit_block;
  system.divergence_block = &p.divergence();
  system.velocity_rhs = forcing;
  system.pressure_constraint_row = p.pressure_constraint_row();
  system.velocity_dirichlet = &p.dofmap().velocity_dirichlet;
  auto [h, pressure] = solve_saddle(system);

  const double norm = std::sqrt(h.dot(p.vector_laplacian_unit().matrix * h));
  if (norm > 0.0) h /= norm;
  return h;
}

}  // namespace convcool
