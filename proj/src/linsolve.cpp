#include "convcool/linsolve.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "convcool/errors.hpp"

namespace convcool {

namespace {

double inf_norm(const Eigen::SparseMatrix<double>& a) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
      row_sums[it.row()] += std::abs(it.value());
  return a.nonZeros() == 0 ? 0.0 : row_sums.maxCoeff();
}

}  // namespace

struct DirectSolver::Impl {
  Eigen::SparseMatrix<double> matrix;  // column-major for SparseLU
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  double matrix_inf_norm = 0.0;
};

DirectSolver::DirectSolver(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix) {
  impl_ = std::make_unique<Impl>();
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  impl_->matrix_inf_norm = inf_norm(impl_->matrix);
  impl_->lu.compute(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sparse LU factorization failed (" << matrix.rows() << "x" << matrix.cols()
        << ", nnz " << matrix.nonZeros() << "): matrix is singular or structurally deficient";
    throw SolverFailure(msg.str());
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  const double rhs_inf = rhs.size() ? rhs.cwiseAbs().maxCoeff() : 0.0;
  auto backward_error = [&](const Eigen::VectorXd& sol, const Eigen::VectorXd& residual) {
    const double x_inf = sol.size() ? sol.cwiseAbs().maxCoeff() : 0.0;
    const double denom = impl_->matrix_inf_norm * x_inf + rhs_inf;
    return denom == 0.0 ? residual.cwiseAbs().maxCoeff()
                        : residual.cwiseAbs().maxCoeff() / denom;
  };

  Eigen::VectorXd residual = rhs - impl_->matrix * x;
  for (int pass = 0; pass < 3 && backward_error(x, residual) > 1e-15; ++pass) {
    x += impl_->lu.solve(residual);
    residual = rhs - impl_->matrix * x;
  }

  const double err = backward_error(x, residual);
  if (!(err <= 1e-10)) {
    std::ostringstream msg;
    msg << "direct solve did not reach the residual contract: backward error " << err
        << " after refinement (" << impl_->matrix.rows() << " unknowns, nnz "
        << impl_->matrix.nonZeros() << "); the system is singular or too ill-conditioned";
    throw SolverFailure(msg.str());
  }
  return x;
}

void eliminate_dirichlet(std::vector<Eigen::Triplet<double>>& triplets,
                         const std::vector<bool>& constrained) {
  std::vector<Eigen::Triplet<double>> kept;
  kept.reserve(triplets.size() + constrained.size());
  for (const auto& t : triplets)
    if (!constrained[t.row()] && !constrained[t.col()]) kept.push_back(t);
  for (int i = 0; i < int(constrained.size()); ++i)
    if (constrained[i]) kept.emplace_back(i, i, 1.0);
  triplets.swap(kept);
}

ScalarField solve_scalar(const LinearSystem& system) {
  const auto& a = system.matrix.matrix;
  if (a.rows() != a.cols() || system.rhs.size() != a.rows())
    throw InvalidArgument("solve_scalar: dimension mismatch");
  const std::vector<bool>* mask = system.dirichlet;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, k); it; ++it)
      triplets.emplace_back(int(it.row()), int(it.col()), it.value());
  Eigen::VectorXd rhs = system.rhs;
  if (mask) {
    eliminate_dirichlet(triplets, *mask);
    for (int i = 0; i < int(mask->size()); ++i)
      if ((*mask)[i]) rhs[i] = 0.0;
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> reduced(a.rows(), a.cols());
  reduced.setFromTriplets(triplets.begin(), triplets.end());

  DirectSolver solver(reduced);
  Eigen::VectorXd x = solver.solve(rhs);
  if (mask)
    for (int i = 0; i < int(mask->size()); ++i)
      if ((*mask)[i]) x[i] = 0.0;

  const double rnorm = (reduced * x - rhs).norm();
  const double bnorm = rhs.norm();
  if (bnorm > 0.0 && !(rnorm <= 1e-10 * bnorm)) {
    std::ostringstream msg;
    msg << "solve_scalar: residual " << rnorm << " exceeds 1e-10 * |b| = " << 1e-10 * bnorm;
    throw SolverFailure(msg.str());
  }
  return x;
}

std::pair<VectorField, PressureField> solve_saddle(const SaddleSystem& system) {
  const auto& d = system.velocity_block->matrix;
  const auto& b = system.divergence_block->matrix;
  const int nu = int(d.rows());
  const int np = int(b.rows());
  if (d.cols() != nu || b.cols() != nu || system.velocity_rhs.size() != nu ||
      system.pressure_constraint_row.size() != np)
    throw InvalidArgument("solve_saddle: inconsistent block dimensions");
  const std::vector<bool>& fixed = *system.velocity_dirichlet;
  const int total = nu + np + 1;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(d.nonZeros() + 2 * b.nonZeros() + 2 * np + nu);
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(d, k); it; ++it)
      if (!fixed[it.row()] && !fixed[it.col()])
        triplets.emplace_back(int(it.row()), int(it.col()), it.value());
  for (int i = 0; i < nu; ++i)
    if (fixed[i]) triplets.emplace_back(i, i, 1.0);
  for (int k = 0; k < b.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(b, k); it; ++it) {
      if (fixed[it.col()]) continue;
      triplets.emplace_back(int(it.col()), nu + int(it.row()), -it.value());  // -B^T
      triplets.emplace_back(nu + int(it.row()), int(it.col()), it.value());   // B
    }
  for (int i = 0; i < np; ++i) {
    const double c = system.pressure_constraint_row[i];
    triplets.emplace_back(nu + i, nu + np, c);
    triplets.emplace_back(nu + np, nu + i, c);
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> monolithic(total, total);
  monolithic.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total);
  for (int i = 0; i < nu; ++i) rhs[i] = fixed[i] ? 0.0 : system.velocity_rhs[i];

  DirectSolver solver(monolithic);
  Eigen::VectorXd sol = solver.solve(rhs);
  VectorField v = sol.head(nu);
  PressureField p = sol.segment(nu, np);
  for (int i = 0; i < nu; ++i)
    if (fixed[i]) v[i] = 0.0;

  // Recomputed block residuals; the factorization's own estimate is not trusted.
  Eigen::VectorXd momentum = d * v;
  momentum -= b.transpose() * p;
  double mom_scale = 0.0;
  double mom_res = 0.0;
  for (int i = 0; i < nu; ++i) {
    if (fixed[i]) continue;
    mom_res += std::pow(momentum[i] - system.velocity_rhs[i], 2);
    mom_scale += std::pow(system.velocity_rhs[i], 2);
  }
  mom_res = std::sqrt(mom_res);
  mom_scale = std::max(std::sqrt(mom_scale), (d * v).norm() + (b.transpose() * p).norm());
  if (mom_scale > 0.0 && !(mom_res <= 1e-10 * mom_scale))
    throw SolverFailure("solve_saddle: momentum residual above contract");

  const double div_res = (b * v).norm();
  const double div_scale = std::max(1.0, inf_norm(b) * v.cwiseAbs().maxCoeff());
  if (!(div_res <= 1e-10 * div_scale))
    throw SolverFailure("solve_saddle: discrete divergence above contract");

  const double mean_p = system.pressure_constraint_row.dot(p);
  const double mean_scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if (!(std::abs(mean_p) <= 1e-12 * mean_scale))
    throw SolverFailure("solve_saddle: pressure mean constraint violated");

  return {std::move(v), std::move(p)};
}

}  // namespace convcool
