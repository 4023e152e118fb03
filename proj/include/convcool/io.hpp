#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "convcool/analysis.hpp"
#include "convcool/optimizer.hpp"

namespace convcool {

/// Legacy ASCII VTK (UNSTRUCTURED_GRID, cell type 5). Scalars T, q, p and
/// the velocity vector are sampled at the mesh vertices, 17 significant
/// digits per value.
void write_vtk(const std::string& path, const Mesh& mesh, const DofMap& dofmap,
               const OptState& state);

/// Header phase,k,J,variance_term,control_term,relative_change,
/// nonlinear_residual; one row per iteration including k = 0, whose
/// relative_change cell is empty.
void write_iterations_csv(const std::string& path, const std::vector<IterationRecord>& history);

/// Header gamma,J,variance_norm,control_energy,r_J,r_T,r_v; the rate cells
/// of the final row are empty.
void write_sweep_csv(const std::string& path, const RateTable& table);

/// Minimal readers for round-trip checks of the writers above.
struct VtkData {
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<int, 3>> triangles;
  std::map<std::string, std::vector<double>> scalars;
  std::map<std::string, std::vector<std::array<double, 3>>> vectors;
};
VtkData read_vtk(const std::string& path);

std::vector<IterationRecord> read_iterations_csv(const std::string& path);
RateTable read_sweep_csv(const std::string& path);

}  // namespace convcool
