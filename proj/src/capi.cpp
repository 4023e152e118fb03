#include "convcool.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "convcool/analysis.hpp"
#include "convcool/errors.hpp"
#include "convcool/io.hpp"
#include "convcool/optimizer.hpp"
#include "convcool/sources.hpp"

struct cc_source {
  convcool::SourceTerm term;
};

struct cc_problem {
  std::shared_ptr<const convcool::Problem> impl;
};

struct cc_run {
  std::shared_ptr<const convcool::Problem> problem;
  convcool::RunResult result;
};

namespace {

thread_local std::string last_error;

template <typename Fn>
cc_status guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return CC_OK;
  } catch (const convcool::InvalidArgument& e) {
    last_error = e.what();
    return CC_ERR_INVALID_ARGUMENT;
  } catch (const convcool::ParseError& e) {
    last_error = e.what();
    return CC_ERR_PARSE;
  } catch (const convcool::SolverFailure& e) {
    last_error = e.what();
    return CC_ERR_SOLVER_FAILURE;
  } catch (const convcool::IoError& e) {
    last_error = e.what();
    return CC_ERR_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CC_ERR_INVALID_ARGUMENT;
  }
}

cc_status require(bool ok, const char* message) {
  if (ok) return CC_OK;
  last_error = message;
  return CC_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* cc_status_name(cc_status status) {
  switch (status) {
    case CC_OK: return "ok";
    case CC_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CC_ERR_PARSE: return "parse-error";
    case CC_ERR_SOLVER_FAILURE: return "solver-failure";
    case CC_ERR_IO: return "io-error";
  }
  return "unknown";
}

const char* cc_last_error(void) { return last_error.c_str(); }

const char* cc_version(void) { return "0.1.0"; }

cc_status cc_source_create_example(int id, cc_source** out) {
  if (cc_status s = require(out != nullptr, "cc_source_create_example: out is null")) return s;
  return guard([&] { *out = new cc_source{convcool::example_source(id)}; });
}

cc_status cc_source_create_expression(const char* expression, cc_source** out) {
  if (cc_status s = require(out && expression, "cc_source_create_expression: null argument"))
    return s;
  return guard([&] { *out = new cc_source{convcool::parse_source_expression(expression)}; });
}

double cc_source_eval(const cc_source* source, double x, double y) {
  return source ? source->term(x, y) : std::nan("");
}

void cc_source_destroy(cc_source* source) { delete source; }

cc_status cc_problem_create(int subdivisions, double kappa, int skew_convection,
                            const cc_source* source, cc_problem** out) {
  if (cc_status s = require(out && source, "cc_problem_create: null argument")) return s;
  if (cc_status s = require(subdivisions >= 2, "cc_problem_create: subdivisions must be >= 2"))
    return s;
  return guard([&] {
    *out = new cc_problem{std::make_shared<const convcool::Problem>(
        subdivisions, kappa, source->term, skew_convection != 0)};
  });
}

void cc_problem_destroy(cc_problem* problem) { delete problem; }

size_t cc_problem_vertex_count(const cc_problem* p) {
  return p ? p->impl->mesh().vertices.size() : 0;
}

size_t cc_problem_triangle_count(const cc_problem* p) {
  return p ? p->impl->mesh().triangles.size() : 0;
}

cc_status cc_problem_vertices(const cc_problem* p, double* xy) {
  if (cc_status s = require(p && xy, "cc_problem_vertices: null argument")) return s;
  const auto& vertices = p->impl->mesh().vertices;
  for (size_t v = 0; v < vertices.size(); ++v) {
    xy[2 * v] = vertices[v][0];
    xy[2 * v + 1] = vertices[v][1];
  }
  return CC_OK;
}

cc_status cc_problem_triangles(const cc_problem* p, int* indices) {
  if (cc_status s = require(p && indices, "cc_problem_triangles: null argument")) return s;
  const auto& triangles = p->impl->mesh().triangles;
  for (size_t t = 0; t < triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) indices[3 * t + k] = triangles[t][k];
  return CC_OK;
}

void cc_solve_options_defaults(cc_solve_options* options) {
  if (!options) return;
  options->gamma = 1.0;
  options->eps1 = 1e-3;
  options->eps2 = 1e-8;
  options->max_picard = 20;
  options->max_newton = 20;
}

cc_status cc_problem_solve(const cc_problem* problem, const cc_solve_options* options,
                           cc_run** out) {
  if (cc_status s = require(problem && options && out, "cc_problem_solve: null argument"))
    return s;
  return guard([&] {
    convcool::AlgorithmOptions opts;
    opts.gamma = options->gamma;
    opts.eps1 = options->eps1;
    opts.eps2 = options->eps2;
    opts.max_picard = options->max_picard;
    opts.max_newton = options->max_newton;
    auto result = convcool::run_algorithm(*problem->impl, opts);
    if (result.solver_failed) throw convcool::SolverFailure(result.failure_message);
    *out = new cc_run{problem->impl, std::move(result)};
  });
}

void cc_run_destroy(cc_run* run) { delete run; }

int cc_run_converged(const cc_run* run) { return run && run->result.converged ? 1 : 0; }

size_t cc_run_iteration_count(const cc_run* run) { return run ? run->result.history.size() : 0; }

cc_status cc_run_iteration(const cc_run* run, size_t index, cc_iteration* out) {
  if (cc_status s = require(run && out, "cc_run_iteration: null argument")) return s;
  if (cc_status s = require(index < run->result.history.size(), "cc_run_iteration: index out of range"))
    return s;
  const auto& rec = run->result.history[index];
  out->phase = rec.phase == convcool::Phase::picard ? 0 : 1;
  out->index = rec.index;
  out->cost = rec.cost;
  out->variance_term = rec.variance_term;
  out->control_term = rec.control_term;
  out->relative_change = rec.relative_change;
  out->nonlinear_residual = rec.nonlinear_residual;
  return CC_OK;
}

double cc_run_cost(const cc_run* run) {
  return convcool::cost(*run->problem, run->result.state).total;
}

double cc_run_variance_norm(const cc_run* run) {
  return std::sqrt(2.0 * convcool::cost(*run->problem, run->result.state).variance_term);
}

double cc_run_control_energy(const cc_run* run) {
  return 2.0 * convcool::cost(*run->problem, run->result.state).control_term;
}

double cc_run_max_vertex_temperature(const cc_run* run) {
  const auto& mesh = run->problem->mesh();
  double value = -std::numeric_limits<double>::infinity();
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    value = std::max(value, run->result.state.temperature[int(v)]);
  return value;
}

double cc_run_min_vertex_temperature(const cc_run* run) {
  const auto& mesh = run->problem->mesh();
  double value = std::numeric_limits<double>::infinity();
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    value = std::min(value, run->result.state.temperature[int(v)]);
  return value;
}

double cc_run_max_vertex_speed(const cc_run* run) {
  const auto& state = run->result.state;
  const int nodes = int(state.velocity.size()) / 2;
  double value = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double vx = state.velocity[2 * k];
    const double vy = state.velocity[2 * k + 1];
    value = std::max(value, std::hypot(vx, vy));
  }
  return value;
}

double cc_run_divergence_norm(const cc_run* run) {
  return convcool::divergence_norm(*run->problem, run->result.state.velocity);
}

double cc_run_gamma(const cc_run* run) { return run->result.state.gamma; }

double cc_run_kappa(const cc_run* run) { return run->result.state.kappa; }

cc_status cc_run_vertex_fields(const cc_run* run, double* temperature, double* adjoint,
                               double* pressure, double* velocity_xy) {
  if (cc_status s = require(run != nullptr, "cc_run_vertex_fields: run is null")) return s;
  const auto& state = run->result.state;
  const size_t nv = run->problem->mesh().vertices.size();
  for (size_t v = 0; v < nv; ++v) {
    if (temperature) temperature[v] = state.temperature[int(v)];
    if (adjoint) adjoint[v] = state.adjoint[int(v)];
    if (pressure) pressure[v] = state.pressure[int(v)];
    if (velocity_xy) {
      velocity_xy[2 * v] = state.velocity[convcool::DofMap::velocity_dof(int(v), 0)];
      velocity_xy[2 * v + 1] = state.velocity[convcool::DofMap::velocity_dof(int(v), 1)];
    }
  }
  return CC_OK;
}

cc_status cc_run_scale(const cc_run* run, double kappa, cc_run** out) {
  if (cc_status s = require(run && out, "cc_run_scale: null argument")) return s;
  return guard([&] {
    auto scaled = std::make_unique<cc_run>();
    scaled->problem = run->problem;
    scaled->result.converged = run->result.converged;
    scaled->result.state = convcool::scale_solution(run->result.state, kappa);
    scaled->result.history = run->result.history;
    const double factor = 1.0 / (kappa * kappa);
    for (auto& rec : scaled->result.history) {
      rec.cost *= factor;
      rec.variance_term *= factor;
      rec.control_term *= factor;
    }
    *out = scaled.release();
  });
}

cc_status cc_run_export_vtk(const cc_run* run, const char* path) {
  if (cc_status s = require(run && path, "cc_run_export_vtk: null argument")) return s;
  return guard([&] {
    convcool::write_vtk(path, run->problem->mesh(), run->problem->dofmap(), run->result.state);
  });
}

cc_status cc_run_export_iterations_csv(const cc_run* run, const char* path) {
  if (cc_status s = require(run && path, "cc_run_export_iterations_csv: null argument")) return s;
  return guard([&] { convcool::write_iterations_csv(path, run->result.history); });
}

cc_status cc_compute_rates(size_t rows, const double* gamma, const double* cost,
                           const double* variance_norm, const double* control_energy,
                           double* r_cost, double* r_variance, double* r_control) {
  if (cc_status s = require(gamma && cost && variance_norm && control_energy,
                            "cc_compute_rates: null input array"))
    return s;
  return guard([&] {
    std::vector<std::array<double, 4>> sweep(rows);
    for (size_t i = 0; i < rows; ++i)
      sweep[i] = {gamma[i], cost[i], variance_norm[i], control_energy[i]};
    const auto table = convcool::compute_rates(sweep);
    for (size_t i = 0; i + 1 < rows; ++i) {
      if (r_cost) r_cost[i] = table.rows[i].r_cost;
      if (r_variance) r_variance[i] = table.rows[i].r_variance;
      if (r_control) r_control[i] = table.rows[i].r_control;
    }
  });
}

cc_status cc_export_sweep_csv(const char* path, size_t rows, const double* gamma,
                              const double* cost, const double* variance_norm,
                              const double* control_energy) {
  if (cc_status s = require(path && gamma && cost && variance_norm && control_energy,
                            "cc_export_sweep_csv: null argument"))
    return s;
  if (cc_status s = require(rows >= 1, "cc_export_sweep_csv: need at least one row")) return s;
  return guard([&] {
    convcool::RateTable table;
    if (rows >= 2) {
      std::vector<std::array<double, 4>> sweep(rows);
      for (size_t i = 0; i < rows; ++i)
        sweep[i] = {gamma[i], cost[i], variance_norm[i], control_energy[i]};
      table = convcool::compute_rates(sweep);
    } else {
      table.rows.push_back({gamma[0], cost[0], variance_norm[0], control_energy[0], 0.0, 0.0,
                            0.0, false});
    }
    convcool::write_sweep_csv(path, table);
  });
}

}  // extern "C"
