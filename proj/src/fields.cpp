#include "convcool/fields.hpp"

namespace convcool {

ScalarField interpolate_p2(const DofMap& dm, const ScalarFunction& f) {
  ScalarField out(dm.p2_count);
  for (int k = 0; k < dm.p2_count; ++k) out[k] = f(dm.p2_coords[k][0], dm.p2_coords[k][1]);
  return out;
}

VectorField interpolate_velocity(const DofMap& dm, const ScalarFunction& fx,
                                 const ScalarFunction& fy) {
  VectorField out(dm.velocity_count);
  for (int k = 0; k < dm.p2_count; ++k) {
    const auto& p = dm.p2_coords[k];
    out[DofMap::velocity_dof(k, 0)] = fx(p[0], p[1]);
    out[DofMap::velocity_dof(k, 1)] = fy(p[0], p[1]);
  }
  return out;
}

PressureField interpolate_p1(const Mesh& mesh, const ScalarFunction& f) {
  PressureField out(mesh.vertices.size());
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    out[v] = f(mesh.vertices[v][0], mesh.vertices[v][1]);
  return out;
}

}  // namespace convcool
