#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace convcool {

/// One mesh edge, endpoints stored with a < b.
struct Edge {
  int a = -1;
  int b = -1;
  std::array<int, 2> adjacent_triangles{-1, -1};
  int triangle_count = 0;
};

/// Uniform triangulation of the unit square: (n+1)^2 vertices numbered
/// row-major (x fastest), every cell split along its lower-left to
/// upper-right diagonal, all triangles counterclockwise.
struct Mesh {
  int n = 0;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;  // sorted lexicographically by (a, b)
  std::vector<bool> boundary_vertex;
  std::vector<bool> boundary_edge;

  double spacing() const { return 1.0 / n; }
  double triangle_area() const { return 0.5 / (double(n) * n); }
};

Mesh build_uniform_mesh(int n);

enum class Space { P1, P2, VectorP2 };

/// Degree-of-freedom numbering for the Taylor-Hood pair plus the scalar
/// P2 space. P2 nodes are the vertices (same index) followed by the edge
/// midpoints; vector-P2 components are interleaved (x, y) per node.
struct DofMap {
  int p1_count = 0;
  int p2_count = 0;
  int velocity_count = 0;

  /// Per-triangle P2 indices in local order [v0, v1, v2, m01, m12, m02].
  std::vector<std::array<int, 6>> cell_p2;
  /// Coordinates of every P2 node (vertices, then edge midpoints).
  std::vector<Eigen::Vector2d> p2_coords;

  std::vector<bool> p1_dirichlet;
  std::vector<bool> p2_dirichlet;
  std::vector<bool> velocity_dirichlet;

  static int velocity_dof(int p2_node, int component) { return 2 * p2_node + component; }
  int p2_of_vertex(int v) const { return v; }
  int p2_of_edge(int e) const { return vertex_count_ + e; }

  int vertex_count_ = 0;
};

DofMap build_dofmap(const Mesh& mesh);

/// Indices of the DOFs whose node lies on the boundary of the unit square;
/// for VectorP2 both components of each boundary node are returned.
std::vector<int> boundary_dofs(const DofMap& dofmap, Space space);

}  // namespace convcool
