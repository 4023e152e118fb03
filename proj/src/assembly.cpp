#include "convcool/assembly.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "convcool/errors.hpp"
#include "convcool/quadrature.hpp"

namespace convcool {

namespace {

using Triplet = Eigen::Triplet<double>;

/// Reference-element data evaluated once per quadrature point.
struct QuadCache {
  std::vector<QuadraturePoint> points;
  std::vector<std::array<double, 6>> p2_vals;
  std::vector<std::array<Eigen::Vector2d, 6>> p2_grads;
  std::vector<std::array<double, 3>> p1_vals;

  QuadCache() {
    const auto& rule = TriangleQuadrature::degree5();
    points = rule.points;
    p2_vals.resize(points.size());
    p2_grads.resize(points.size());
    p1_vals.resize(points.size());
    for (size_t q = 0; q < points.size(); ++q) {
      p2_values(points[q].lambda, p2_vals[q]);
      p2_reference_gradients(points[q].lambda, p2_grads[q]);
      p1_values(points[q].lambda, p1_vals[q]);
    }
  }
};

const QuadCache& quad_cache() {
  static const QuadCache cache;
  return cache;
}

/// Element-parallel loop with an associative reduction into one triplet
/// list. The chunk layout depends only on the element count, so the
/// resulting triplet sequence (and hence the assembled matrix) is
/// identical for any thread count.
template <typename PerElement>
std::vector<Triplet> element_triplets(size_t n_elements, size_t triplets_per_element,
                                      PerElement&& per_element) {
  const size_t n_chunks = std::clamp<size_t>(n_elements / 128, 1, 64);
  std::vector<std::vector<Triplet>> chunk_out(n_chunks);

  auto run_chunk = [&](size_t c) {
    const size_t begin = c * n_elements / n_chunks;
    const size_t end = (c + 1) * n_elements / n_chunks;
    auto& out = chunk_out[c];
    out.reserve((end - begin) * triplets_per_element);
    for (size_t t = begin; t < end; ++t) per_element(t, out);
  };

  const size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t n_threads = std::min(hw, n_chunks);
  if (n_threads <= 1) {
    for (size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t i = 0; i < n_threads; ++i)
      pool.emplace_back([&] {
        for (size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  size_t total = 0;
  for (const auto& v : chunk_out) total += v.size();
  std::vector<Triplet> all;
  all.reserve(total);
  for (const auto& v : chunk_out) all.insert(all.end(), v.begin(), v.end());
  return all;
}

SparseOperator from_triplets(int rows, int cols, const std::vector<Triplet>& triplets,
                             bool symmetric) {
  SparseOperator op;
  op.matrix.resize(rows, cols);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  op.symmetric = symmetric;
  return op;
}

void physical_gradients(const ElementGeometry& g, const std::array<Eigen::Vector2d, 6>& ref,
                        std::array<Eigen::Vector2d, 6>& out) {
  for (int i = 0; i < 6; ++i) out[i] = g.inverse_jacobian_t * ref[i];
}

}  // namespace

SparseOperator assemble_stiffness(const Mesh& mesh, const DofMap& dm, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("assemble_stiffness: kappa must be positive");
  const auto& qc = quad_cache();
  auto triplets = element_triplets(mesh.triangles.size(), 36, [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (size_t q = 0; q < qc.points.size(); ++q) {
      physical_gradients(g, qc.p2_grads[q], grad);
      const double w = kappa * qc.points[q].weight * g.det;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local(i, j) += w * grad[i].dot(grad[j]);
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) out.emplace_back(dofs[i], dofs[j], local(i, j));
  });
  return from_triplets(dm.p2_count, dm.p2_count, triplets, true);
}

SparseOperator assemble_mass(const Mesh& mesh, const DofMap& dm, Space space) {
  if (space == Space::VectorP2) throw InvalidArgument("assemble_mass: P1 or P2 only");
  const auto& qc = quad_cache();
  const bool p2 = space == Space::P2;
  const int nloc = p2 ? 6 : 3;
  auto triplets = element_triplets(mesh.triangles.size(), nloc * nloc,
                                   [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& tri = mesh.triangles[t];
    const auto& p2dofs = dm.cell_p2[t];
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (size_t q = 0; q < qc.points.size(); ++q) {
      const double w = qc.points[q].weight * g.det;
      for (int i = 0; i < nloc; ++i) {
        const double vi = p2 ? qc.p2_vals[q][i] : qc.p1_vals[q][i];
        for (int j = 0; j < nloc; ++j) {
          const double vj = p2 ? qc.p2_vals[q][j] : qc.p1_vals[q][j];
          local(i, j) += w * vi * vj;
        }
      }
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        out.emplace_back(p2 ? p2dofs[i] : tri[i], p2 ? p2dofs[j] : tri[j], local(i, j));
  });
  const int dim = p2 ? dm.p2_count : dm.p1_count;
  return from_triplets(dim, dim, triplets, true);
}

SparseOperator assemble_vector_laplacian(const Mesh& mesh, const DofMap& dm, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("assemble_vector_laplacian: gamma must be positive");
  const auto& qc = quad_cache();
  auto triplets = element_triplets(mesh.triangles.size(), 72, [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (size_t q = 0; q < qc.points.size(); ++q) {
      physical_gradients(g, qc.p2_grads[q], grad);
      const double w = gamma * qc.points[q].weight * g.det;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local(i, j) += w * grad[i].dot(grad[j]);
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          out.emplace_back(DofMap::velocity_dof(dofs[i], c), DofMap::velocity_dof(dofs[j], c),
                           local(i, j));
  });
  return from_triplets(dm.velocity_count, dm.velocity_count, triplets, true);
}

SparseOperator assemble_divergence(const Mesh& mesh, const DofMap& dm) {
  const auto& qc = quad_cache();
  auto triplets = element_triplets(mesh.triangles.size(), 36, [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& tri = mesh.triangles[t];
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    Eigen::Matrix<double, 3, 12> local = Eigen::Matrix<double, 3, 12>::Zero();
    for (size_t q = 0; q < qc.points.size(); ++q) {
      physical_gradients(g, qc.p2_grads[q], grad);
      const double w = qc.points[q].weight * g.det;
      for (int i = 0; i < 3; ++i) {
        const double theta = qc.p1_vals[q][i];
        for (int j = 0; j < 6; ++j)
          for (int c = 0; c < 2; ++c) local(i, 2 * j + c) += w * grad[j][c] * theta;
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          out.emplace_back(tri[i], DofMap::velocity_dof(dofs[j], c), local(i, 2 * j + c));
  });
  return from_triplets(dm.p1_count, dm.velocity_count, triplets, false);
}

SparseOperator assemble_convection(const Mesh& mesh, const DofMap& dm, const VectorField& w,
                                   bool skew) {
  if (w.size() != dm.velocity_count)
    throw InvalidArgument("assemble_convection: advecting field has wrong dimension");
  const auto& qc = quad_cache();
  auto triplets = element_triplets(mesh.triangles.size(), 36, [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (size_t q = 0; q < qc.points.size(); ++q) {
      physical_gradients(g, qc.p2_grads[q], grad);
      Eigen::Vector2d wq = Eigen::Vector2d::Zero();
      for (int k = 0; k < 6; ++k) {
        wq[0] += w[DofMap::velocity_dof(dofs[k], 0)] * qc.p2_vals[q][k];
        wq[1] += w[DofMap::velocity_dof(dofs[k], 1)] * qc.p2_vals[q][k];
      }
      const double s = qc.points[q].weight * g.det;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local(i, j) += s * wq.dot(grad[j]) * qc.p2_vals[q][i];
    }
    if (skew) local = 0.5 * (local - local.transpose()).eval();
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) out.emplace_back(dofs[i], dofs[j], local(i, j));
  });
  return from_triplets(dm.p2_count, dm.p2_count, triplets, false);
}

SparseOperator assemble_advection_of(const Mesh& mesh, const DofMap& dm, const ScalarField& a,
                                     bool skew) {
  if (a.size() != dm.p2_count)
    throw InvalidArgument("assemble_advection_of: scalar field has wrong dimension");
  const auto& qc = quad_cache();
  auto triplets = element_triplets(mesh.triangles.size(), 72, [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    Eigen::Matrix<double, 6, 12> local = Eigen::Matrix<double, 6, 12>::Zero();
    for (size_t q = 0; q < qc.points.size(); ++q) {
      physical_gradients(g, qc.p2_grads[q], grad);
      double aq = 0.0;
      Eigen::Vector2d grad_a = Eigen::Vector2d::Zero();
      for (int k = 0; k < 6; ++k) {
        aq += a[dofs[k]] * qc.p2_vals[q][k];
        grad_a += a[dofs[k]] * grad[k];
      }
      const double s = qc.points[q].weight * g.det;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          for (int c = 0; c < 2; ++c) {
            double v = qc.p2_vals[q][j] * grad_a[c] * qc.p2_vals[q][i];
            if (skew) v = 0.5 * (v - qc.p2_vals[q][j] * grad[i][c] * aq);
            local(i, 2 * j + c) += s * v;
          }
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          out.emplace_back(dofs[i], DofMap::velocity_dof(dofs[j], c), local(i, 2 * j + c));
  });
  return from_triplets(dm.p2_count, dm.velocity_count, triplets, false);
}

SparseOperator assemble_gradient_coupling(const Mesh& mesh, const DofMap& dm,
                                          const ScalarField& q) {
  if (q.size() != dm.p2_count)
    throw InvalidArgument("assemble_gradient_coupling: scalar field has wrong dimension");
  const auto& qc = quad_cache();
  auto triplets = element_triplets(mesh.triangles.size(), 72, [&](size_t t, std::vector<Triplet>& out) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    Eigen::Matrix<double, 12, 6> local = Eigen::Matrix<double, 12, 6>::Zero();
    for (size_t p = 0; p < qc.points.size(); ++p) {
      physical_gradients(g, qc.p2_grads[p], grad);
      double qv = 0.0;
      for (int k = 0; k < 6; ++k) qv += q[dofs[k]] * qc.p2_vals[p][k];
      const double s = qc.points[p].weight * g.det;
      for (int i = 0; i < 6; ++i)
        for (int c = 0; c < 2; ++c)
          for (int j = 0; j < 6; ++j)
            local(2 * i + c, j) += s * qv * grad[j][c] * qc.p2_vals[p][i];
    }
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 6; ++j)
          out.emplace_back(DofMap::velocity_dof(dofs[i], c), dofs[j], local(2 * i + c, j));
  });
  return from_triplets(dm.velocity_count, dm.p2_count, triplets, false);
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dm, const SourceTerm& f) {
  const auto& qc = quad_cache();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dm.p2_count);
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    for (size_t q = 0; q < qc.points.size(); ++q) {
      const Eigen::Vector2d x = g.point(qc.points[q].lambda);
      const double s = qc.points[q].weight * g.det * f(x[0], x[1]);
      for (int i = 0; i < 6; ++i) b[dofs[i]] += s * qc.p2_vals[q][i];
    }
  }
  return b;
}

Eigen::VectorXd assemble_vector_load(const Mesh& mesh, const DofMap& dm,
                                     const ScalarFunction& fx, const ScalarFunction& fy) {
  const auto& qc = quad_cache();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dm.velocity_count);
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    for (size_t q = 0; q < qc.points.size(); ++q) {
      const Eigen::Vector2d x = g.point(qc.points[q].lambda);
      const double s = qc.points[q].weight * g.det;
      const double vx = fx(x[0], x[1]);
      const double vy = fy(x[0], x[1]);
      for (int i = 0; i < 6; ++i) {
        b[DofMap::velocity_dof(dofs[i], 0)] += s * vx * qc.p2_vals[q][i];
        b[DofMap::velocity_dof(dofs[i], 1)] += s * vy * qc.p2_vals[q][i];
      }
    }
  }
  return b;
}

Eigen::VectorXd assemble_coupling(const Mesh& mesh, const DofMap& dm, const ScalarField& q,
                                  const ScalarField& T) {
  if (q.size() != dm.p2_count || T.size() != dm.p2_count)
    throw InvalidArgument("assemble_coupling: field dimensions must match the P2 space");
  const auto& qc = quad_cache();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dm.velocity_count);
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto g = ElementGeometry::from(mesh, int(t));
    const auto& dofs = dm.cell_p2[t];
    std::array<Eigen::Vector2d, 6> grad;
    for (size_t p = 0; p < qc.points.size(); ++p) {
      physical_gradients(g, qc.p2_grads[p], grad);
      double qv = 0.0;
      Eigen::Vector2d grad_T = Eigen::Vector2d::Zero();
      for (int k = 0; k < 6; ++k) {
        qv += q[dofs[k]] * qc.p2_vals[p][k];
        grad_T += T[dofs[k]] * grad[k];
      }
      const double s = qc.points[p].weight * g.det * qv;
      for (int i = 0; i < 6; ++i) {
        b[DofMap::velocity_dof(dofs[i], 0)] += s * grad_T[0] * qc.p2_vals[p][i];
        b[DofMap::velocity_dof(dofs[i], 1)] += s * grad_T[1] * qc.p2_vals[p][i];
      }
    }
  }
  return b;
}

double mean_value(const SparseOperator& mass_p2, const ScalarField& T) {
  return (mass_p2.matrix * T).sum();
}

ScalarField apply_mean_deviation(const SparseOperator& mass_p2, const ScalarField& T) {
  return T.array() - mean_value(mass_p2, T);
}

}  // namespace convcool
