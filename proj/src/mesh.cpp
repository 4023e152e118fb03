#include "convcool/mesh.hpp"

#include <algorithm>
#include <map>

#include "convcool/errors.hpp"

namespace convcool {

Mesh build_uniform_mesh(int n) {
  if (n < 1) throw InvalidArgument("build_uniform_mesh: subdivision count must be >= 1");

  Mesh mesh;
  mesh.n = n;
  const int nv = (n + 1) * (n + 1);
  mesh.vertices.reserve(nv);
  mesh.boundary_vertex.resize(nv, false);
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(i * h, j * h);
      if (i == 0 || i == n || j == 0 || j == n) mesh.boundary_vertex[j * (n + 1) + i] = true;
    }
  }

  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * (n + 1) + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + (n + 1);
      const int v11 = v01 + 1;
      // Diagonal v00 -> v11, both triangles counterclockwise.
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, Edge> edge_map;
  for (int t = 0; t < int(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k];
      int b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      Edge& e = edge_map[{a, b}];
      e.a = a;
      e.b = b;
      if (e.triangle_count < 2) e.adjacent_triangles[e.triangle_count] = t;
      ++e.triangle_count;
    }
  }
  mesh.edges.reserve(edge_map.size());
  for (auto& [key, e] : edge_map) mesh.edges.push_back(e);
  mesh.boundary_edge.resize(mesh.edges.size(), false);
  for (size_t e = 0; e < mesh.edges.size(); ++e) mesh.boundary_edge[e] = mesh.edges[e].triangle_count == 1;

  return mesh;
}

DofMap build_dofmap(const Mesh& mesh) {
  DofMap dm;
  const int nv = int(mesh.vertices.size());
  const int ne = int(mesh.edges.size());
  dm.vertex_count_ = nv;
  dm.p1_count = nv;
  dm.p2_count = nv + ne;
  dm.velocity_count = 2 * dm.p2_count;

  dm.p2_coords.resize(dm.p2_count);
  for (int v = 0; v < nv; ++v) dm.p2_coords[v] = mesh.vertices[v];
  for (int e = 0; e < ne; ++e)
    dm.p2_coords[nv + e] = 0.5 * (mesh.vertices[mesh.edges[e].a] + mesh.vertices[mesh.edges[e].b]);

  // Edge lookup by sorted endpoints; edges are stored sorted, so a map
  // rebuilt here stays consistent with the mesh numbering.
  std::map<std::pair<int, int>, int> edge_index;
  for (int e = 0; e < ne; ++e) edge_index[{mesh.edges[e].a, mesh.edges[e].b}] = e;

  auto midpoint_dof = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return nv + edge_index.at({a, b});
  };

  dm.cell_p2.resize(mesh.triangles.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    dm.cell_p2[t] = {tri[0],
                     tri[1],
                     tri[2],
                     midpoint_dof(tri[0], tri[1]),
                     midpoint_dof(tri[1], tri[2]),
                     midpoint_dof(tri[0], tri[2])};
  }

  dm.p1_dirichlet.assign(dm.p1_count, false);
  for (int v = 0; v < nv; ++v) dm.p1_dirichlet[v] = mesh.boundary_vertex[v];

  dm.p2_dirichlet.assign(dm.p2_count, false);
  for (int v = 0; v < nv; ++v) dm.p2_dirichlet[v] = mesh.boundary_vertex[v];
  for (int e = 0; e < ne; ++e) dm.p2_dirichlet[nv + e] = mesh.boundary_edge[e];

  dm.velocity_dirichlet.assign(dm.velocity_count, false);
  for (int k = 0; k < dm.p2_count; ++k) {
    if (dm.p2_dirichlet[k]) {
      dm.velocity_dirichlet[2 * k] = true;
      dm.velocity_dirichlet[2 * k + 1] = true;
    }
  }
  return dm;
}

std::vector<int> boundary_dofs(const DofMap& dm, Space space) {
  const std::vector<bool>* mask = nullptr;
  switch (space) {
    case Space::P1: mask = &dm.p1_dirichlet; break;
    case Space::P2: mask = &dm.p2_dirichlet; break;
    case Space::VectorP2: mask = &dm.velocity_dirichlet; break;
  }
  std::vector<int> out;
  for (int i = 0; i < int(mask->size()); ++i)
    if ((*mask)[i]) out.push_back(i);
  return out;
}

}  // namespace convcool
