#pragma once

#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "convcool/assembly.hpp"
#include "convcool/fields.hpp"

namespace convcool {

/// Scalar Dirichlet problem: the matrix is given over the full DOF set and
/// the listed DOFs are constrained to zero by symmetric elimination.
struct LinearSystem {
  SparseOperator matrix;
  Eigen::VectorXd rhs;
  const std::vector<bool>* dirichlet = nullptr;
};

/// Solves the eliminated system with a sparse direct factorization
/// (fill-reducing ordering, partial pivoting) plus iterative refinement.
/// The recomputed residual must satisfy |Ax - b| <= 1e-10 |b|; Dirichlet
/// DOFs come back exactly zero.
ScalarField solve_scalar(const LinearSystem& system);

/// Stokes-type saddle problem with a mean-zero pressure constraint row
/// appended as a Lagrange multiplier.
struct SaddleSystem {
  const SparseOperator* velocity_block = nullptr;    // vector Laplacian (gamma-scaled)
  const SparseOperator* divergence_block = nullptr;  // P1 x vector-P2
  Eigen::VectorXd velocity_rhs;
  Eigen::VectorXd pressure_constraint_row;  // 1^T M_p1, enforces int p = 0
  const std::vector<bool>* velocity_dirichlet = nullptr;
};

std::pair<VectorField, PressureField> solve_saddle(const SaddleSystem& system);

/// Reusable factorization of an arbitrary square sparse system (used for
/// the monolithic Newton matrix). Solutions are refined and the residual
/// is recomputed from scratch against the stated bound.
class DirectSolver {
 public:
  explicit DirectSolver(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  /// Solve with refinement; throws SolverFailure when the backward error
  /// stays above the contract.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Zero row/column, unit diagonal elimination for homogeneous Dirichlet
/// conditions, applied to a triplet list before matrix construction.
void eliminate_dirichlet(std::vector<Eigen::Triplet<double>>& triplets,
                         const std::vector<bool>& constrained);

}  // namespace convcool
