#include "convcool/analysis.hpp"

#include <cmath>

#include "convcool/errors.hpp"

namespace convcool {

OptState scale_solution(const OptState& state, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("scale_solution: kappa must be positive");
  OptState scaled;
  scaled.temperature = state.temperature / kappa;
  scaled.adjoint = state.adjoint / (kappa * kappa);
  scaled.velocity = kappa * state.velocity;
  scaled.pressure = state.pressure / (kappa * kappa * kappa);
  scaled.kappa = kappa * state.kappa;
  scaled.gamma = state.gamma / (kappa * kappa * kappa * kappa);
  return scaled;
}

RateTable compute_rates(const std::vector<std::array<double, 4>>& sweep) {
  if (sweep.size() < 2) throw InvalidArgument("compute_rates: need at least two sweep rows");
  RateTable table;
  table.rows.resize(sweep.size());
  for (size_t i = 0; i < sweep.size(); ++i) {
    const auto& [gamma, cost, variance_norm, control_energy] = sweep[i];
    if (!(gamma > 0.0)) throw InvalidArgument("compute_rates: gamma values must be positive");
    if (!(cost > 0.0) || !(variance_norm > 0.0))
      throw InvalidArgument("compute_rates: cost and variance norm must be positive");
    if (i > 0 && !(gamma > sweep[i - 1][0]))
      throw InvalidArgument("compute_rates: gamma values must be strictly increasing");
    table.rows[i] = {gamma, cost, variance_norm, control_energy, 0.0, 0.0, 0.0, false};
  }
  for (size_t i = 0; i + 1 < sweep.size(); ++i) {
    const double dg = std::log(sweep[i + 1][0] / sweep[i][0]);
    auto& row = table.rows[i];
    row.r_cost = std::log(sweep[i + 1][1] / sweep[i][1]) / dg;
    row.r_variance = std::log(sweep[i + 1][2] / sweep[i][2]) / dg;
    row.r_control = std::log(sweep[i + 1][3] / sweep[i][3]) / dg;
    row.has_rates = true;
  }
  return table;
}

double divergence_norm(const Problem& problem, const VectorField& v) {
  return problem.weak_divergence_norm(v);
}

bool rate_invariance_check(const RateTable& base, const RateTable& scaled, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("rate_invariance_check: kappa must be positive");
  if (base.rows.size() != scaled.rows.size())
    throw InvalidArgument("rate_invariance_check: sweeps differ in length");
  const double factor = 1.0 / (kappa * kappa * kappa * kappa);
  for (size_t i = 0; i < base.rows.size(); ++i) {
    const double expected = base.rows[i].gamma * factor;
    if (std::abs(scaled.rows[i].gamma - expected) > 1e-12 * expected)
      throw InvalidArgument("rate_invariance_check: gamma grids are not related by kappa^-4");
  }
  for (size_t i = 0; i < base.rows.size(); ++i) {
    if (base.rows[i].has_rates != scaled.rows[i].has_rates) return false;
    if (base.rows[i].has_rates &&
        std::abs(base.rows[i].r_cost - scaled.rows[i].r_cost) > 1e-6)
      return false;
  }
  return true;
}

}  // namespace convcool
