#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "convcool/fields.hpp"
#include "convcool/mesh.hpp"

namespace convcool {

/// Assembled bilinear-form matrix in compressed sparse row layout.
struct SparseOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  bool symmetric = false;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

/// External heat source density f(x, y).
struct SourceTerm {
  ScalarFunction value;
  std::string tag = "custom";

  double operator()(double x, double y) const { return value(x, y); }
};

/// P2 x P2 diffusion matrix, entries sum_T int kappa grad(phi_j) . grad(phi_i).
SparseOperator assemble_stiffness(const Mesh& mesh, const DofMap& dm, double kappa);

/// Mass matrix over P1 or P2.
SparseOperator assemble_mass(const Mesh& mesh, const DofMap& dm, Space space);

/// Vector-P2 x vector-P2 matrix, entries gamma int grad(v) : grad(w);
/// block-diagonal over the two components.
SparseOperator assemble_vector_laplacian(const Mesh& mesh, const DofMap& dm, double gamma);

/// P1 x vector-P2 matrix, entries int div(w_j) theta_i.
SparseOperator assemble_divergence(const Mesh& mesh, const DofMap& dm);

/// P2 x P2 convection matrix for a fixed advecting field w, entries
/// int (w . grad phi_j) phi_i; with skew = true the antisymmetrized form
/// (C - C^T)/2 is returned.
SparseOperator assemble_convection(const Mesh& mesh, const DofMap& dm, const VectorField& w,
                                   bool skew = false);

/// P2 x vector-P2 matrix in the advecting velocity for a fixed scalar a:
/// entries int (w_j . grad a) phi_i (skew: minus int (w_j . grad phi_i) a, halved).
SparseOperator assemble_advection_of(const Mesh& mesh, const DofMap& dm, const ScalarField& a,
                                     bool skew = false);

/// Vector-P2 x P2 matrix for a fixed multiplier q: entries (q grad phi_j, w_i).
SparseOperator assemble_gradient_coupling(const Mesh& mesh, const DofMap& dm,
                                          const ScalarField& q);

/// P2 load vector (f, phi_i) by element quadrature.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dm, const SourceTerm& f);

/// Vector-P2 load vector (F, w_i) for an analytic vector field F = (fx, fy).
Eigen::VectorXd assemble_vector_load(const Mesh& mesh, const DofMap& dm,
                                     const ScalarFunction& fx, const ScalarFunction& fy);

/// Vector-P2 vector of the bilinear coupling (q grad T, w_i).
Eigen::VectorXd assemble_coupling(const Mesh& mesh, const DofMap& dm, const ScalarField& q,
                                  const ScalarField& T);

/// Spatial average <T> = int T over the unit square (|Omega| = 1).
double mean_value(const SparseOperator& mass_p2, const ScalarField& T);

/// DT = T - <T>, with the constant interpolated exactly onto P2.
ScalarField apply_mean_deviation(const SparseOperator& mass_p2, const ScalarField& T);

}  // namespace convcool
