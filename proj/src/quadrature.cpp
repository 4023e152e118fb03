#include "convcool/quadrature.hpp"

#include <cmath>

namespace convcool {

const TriangleQuadrature& TriangleQuadrature::degree5() {
  static const TriangleQuadrature rule = [] {
    TriangleQuadrature q;
    q.exact_degree = 5;
    const double s15 = std::sqrt(15.0);
    const double b1 = (6.0 + s15) / 21.0;
    const double a1 = 1.0 - 2.0 * b1;
    const double w1 = (155.0 + s15) / 1200.0;
    const double b2 = (6.0 - s15) / 21.0;
    const double a2 = 1.0 - 2.0 * b2;
    const double w2 = (155.0 - s15) / 1200.0;
    // Normalized weights sum to 1; scale by the reference area 1/2.
    q.points.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.5 * 9.0 / 40.0});
    for (int r = 0; r < 3; ++r) {
      std::array<double, 3> p1{b1, b1, b1};
      p1[r] = a1;
      q.points.push_back({p1, 0.5 * w1});
      std::array<double, 3> p2{b2, b2, b2};
      p2[r] = a2;
      q.points.push_back({p2, 0.5 * w2});
    }
    return q;
  }();
  return rule;
}

void p2_values(const std::array<double, 3>& l, std::array<double, 6>& out) {
  out[0] = l[0] * (2.0 * l[0] - 1.0);
  out[1] = l[1] * (2.0 * l[1] - 1.0);
  out[2] = l[2] * (2.0 * l[2] - 1.0);
  out[3] = 4.0 * l[0] * l[1];
  out[4] = 4.0 * l[1] * l[2];
  out[5] = 4.0 * l[0] * l[2];
}

void p2_reference_gradients(const std::array<double, 3>& l,
                            std::array<Eigen::Vector2d, 6>& out) {
  // lambda = (1 - xi - eta, xi, eta); chain rule against d(lambda)/d(xi,eta).
  const Eigen::Vector2d g0(-1.0, -1.0);
  const Eigen::Vector2d g1(1.0, 0.0);
  const Eigen::Vector2d g2(0.0, 1.0);
  out[0] = (4.0 * l[0] - 1.0) * g0;
  out[1] = (4.0 * l[1] - 1.0) * g1;
  out[2] = (4.0 * l[2] - 1.0) * g2;
  out[3] = 4.0 * (l[1] * g0 + l[0] * g1);
  out[4] = 4.0 * (l[2] * g1 + l[1] * g2);
  out[5] = 4.0 * (l[2] * g0 + l[0] * g2);
}

void p1_values(const std::array<double, 3>& l, std::array<double, 3>& out) {
  out[0] = l[0];
  out[1] = l[1];
  out[2] = l[2];
}

const std::array<Eigen::Vector2d, 3>& p1_reference_gradients() {
  static const std::array<Eigen::Vector2d, 3> g{
      Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
  return g;
}

ElementGeometry ElementGeometry::from(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d& p0 = mesh.vertices[tri[0]];
  const Eigen::Vector2d& p1 = mesh.vertices[tri[1]];
  const Eigen::Vector2d& p2 = mesh.vertices[tri[2]];
  ElementGeometry g;
  g.origin = p0;
  g.jacobian.col(0) = p1 - p0;
  g.jacobian.col(1) = p2 - p0;
  g.det = g.jacobian(0, 0) * g.jacobian(1, 1) - g.jacobian(0, 1) * g.jacobian(1, 0);
  Eigen::Matrix2d inv;
  inv << g.jacobian(1, 1), -g.jacobian(0, 1), -g.jacobian(1, 0), g.jacobian(0, 0);
  inv /= g.det;
  g.inverse_jacobian_t = inv.transpose();
  return g;
}

Eigen::Vector2d ElementGeometry::point(const std::array<double, 3>& l) const {
  return origin + jacobian * Eigen::Vector2d(l[1], l[2]);
}

}  // namespace convcool
