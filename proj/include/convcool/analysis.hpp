#pragma once

#include <array>
#include <vector>

#include "convcool/forward.hpp"

namespace convcool {

/// One gamma-sweep row; the rate columns of the last row are absent.
struct RateRow {
  double gamma = 0.0;
  double cost = 0.0;            // J
  double variance_norm = 0.0;   // |T - <T>|
  double control_energy = 0.0;  // gamma |grad v|^2
  double r_cost = 0.0;
  double r_variance = 0.0;
  double r_control = 0.0;
  bool has_rates = false;
};

struct RateTable {
  std::vector<RateRow> rows;
};

/// Component-wise rescaling of a kappa = 1 solution to the diffusivity
/// kappa, with the control weight mapped to gamma / kappa^4.
OptState scale_solution(const OptState& state, double kappa);

/// Log-log slopes between consecutive sweep points; input tuples are
/// (gamma, J, |T - <T>|, gamma |grad v|^2) with strictly increasing
/// positive gamma.
RateTable compute_rates(const std::vector<std::array<double, 4>>& sweep);

/// M_p1-weighted norm of the discrete divergence of v.
double divergence_norm(const Problem& problem, const VectorField& v);

/// True when the cost rates of two sweeps on gamma grids related by
/// kappa^-4 agree to 1e-6; throws InvalidArgument on grid mismatch.
bool rate_invariance_check(const RateTable& base, const RateTable& scaled, double kappa);

}  // namespace convcool
