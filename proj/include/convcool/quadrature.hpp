#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "convcool/mesh.hpp"

namespace convcool {

/// Quadrature point on the reference triangle in barycentric coordinates.
/// Weights sum to the reference area 1/2.
struct QuadraturePoint {
  std::array<double, 3> lambda;
  double weight;
};

struct TriangleQuadrature {
  std::vector<QuadraturePoint> points;
  int exact_degree = 0;

  /// 7-point rule, exact for polynomials of total degree <= 5.
  static const TriangleQuadrature& degree5();
};

/// Quadratic Lagrange basis on the reference triangle, local node order
/// [v0, v1, v2, m01, m12, m02].
void p2_values(const std::array<double, 3>& lambda, std::array<double, 6>& out);
/// Gradients with respect to (xi, eta) where lambda = (1-xi-eta, xi, eta).
void p2_reference_gradients(const std::array<double, 3>& lambda,
                            std::array<Eigen::Vector2d, 6>& out);

void p1_values(const std::array<double, 3>& lambda, std::array<double, 3>& out);
/// P1 reference gradients are constant: (-1,-1), (1,0), (0,1).
const std::array<Eigen::Vector2d, 3>& p1_reference_gradients();

/// Affine map data for one triangle.
struct ElementGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_jacobian_t;
  double det = 0.0;  // = 2 * area, positive for counterclockwise triangles

  static ElementGeometry from(const Mesh& mesh, int triangle);
  Eigen::Vector2d point(const std::array<double, 3>& lambda) const;
};

}  // namespace convcool
