#include "convcool/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "convcool/errors.hpp"

namespace convcool {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

const char* phase_name(Phase p) { return p == Phase::picard ? "picard" : "newton"; }

Phase phase_from(const std::string& name) {
  if (name == "picard") return Phase::picard;
  if (name == "newton") return Phase::newton;
  throw ParseError("unknown phase '" + name + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

void write_vtk(const std::string& path, const Mesh& mesh, const DofMap& dofmap,
               const OptState& state) {
  auto out = open_out(path);
  const size_t nv = mesh.vertices.size();
  out << "# vtk DataFile Version 3.0\n";
  out << "convcool fields (kappa=" << fmt(state.kappa) << ", gamma=" << fmt(state.gamma) << ")\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& v : mesh.vertices) out << fmt(v[0]) << " " << fmt(v[1]) << " 0\n";
  out << "CELLS " << mesh.triangles.size() << " " << 4 * mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.triangles.size() << "\n";
  for (size_t t = 0; t < mesh.triangles.size(); ++t) out << "5\n";
  out << "POINT_DATA " << nv << "\n";

  auto scalar = [&](const char* name, auto&& value_at) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (size_t v = 0; v < nv; ++v) out << fmt(value_at(int(v))) << "\n";
  };
  scalar("T", [&](int v) { return state.temperature[v]; });
  scalar("q", [&](int v) { return state.adjoint[v]; });
  scalar("p", [&](int v) { return state.pressure[v]; });
  out << "VECTORS velocity double\n";
  for (size_t v = 0; v < nv; ++v)
    out << fmt(state.velocity[DofMap::velocity_dof(int(v), 0)]) << " "
        << fmt(state.velocity[DofMap::velocity_dof(int(v), 1)]) << " 0\n";
  if (!out) throw IoError("write failure on '" + path + "'");
  (void)dofmap;
}

void write_iterations_csv(const std::string& path, const std::vector<IterationRecord>& history) {
  auto out = open_out(path);
  out << "phase,k,J,variance_term,control_term,relative_change,nonlinear_residual\n";
  for (const auto& rec : history) {
    out << phase_name(rec.phase) << "," << rec.index << "," << fmt(rec.cost) << ","
        << fmt(rec.variance_term) << "," << fmt(rec.control_term) << ",";
    if (!std::isnan(rec.relative_change)) out << fmt(rec.relative_change);
    out << "," << fmt(rec.nonlinear_residual) << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

void write_sweep_csv(const std::string& path, const RateTable& table) {
  auto out = open_out(path);
  out << "gamma,J,variance_norm,control_energy,r_J,r_T,r_v\n";
  for (const auto& row : table.rows) {
    out << fmt(row.gamma) << "," << fmt(row.cost) << "," << fmt(row.variance_norm) << ","
        << fmt(row.control_energy) << ",";
    if (row.has_rates)
      out << fmt(row.r_cost) << "," << fmt(row.r_variance) << "," << fmt(row.r_control);
    else
      out << ",,";
    out << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

VtkData read_vtk(const std::string& path) {
  auto in = open_in(path);
  VtkData data;
  std::string token;
  auto expect_count = [&](const char* what) {
    size_t count = 0;
    if (!(in >> count)) throw ParseError(std::string("vtk: missing count after ") + what);
    return count;
  };
  while (in >> token) {
    if (token == "POINTS") {
      const size_t n = expect_count("POINTS");
      in >> token;  // data type
      data.points.resize(n);
      for (auto& pt : data.points) in >> pt[0] >> pt[1] >> pt[2];
    } else if (token == "CELLS") {
      const size_t n = expect_count("CELLS");
      expect_count("CELLS size");
      data.triangles.resize(n);
      for (auto& tri : data.triangles) {
        int k = 0;
        in >> k;
        if (k != 3) throw ParseError("vtk: expected triangle cells");
        in >> tri[0] >> tri[1] >> tri[2];
      }
    } else if (token == "SCALARS") {
      std::string name, type;
      int comps = 1;
      in >> name >> type >> comps;
      in >> token >> token;  // LOOKUP_TABLE default
      auto& values = data.scalars[name];
      values.resize(data.points.size());
      for (auto& v : values) in >> v;
    } else if (token == "VECTORS") {
      std::string name, type;
      in >> name >> type;
      auto& values = data.vectors[name];
      values.resize(data.points.size());
      for (auto& v : values) in >> v[0] >> v[1] >> v[2];
    }
  }
  if (data.points.empty()) throw ParseError("vtk: no POINTS section in '" + path + "'");
  return data;
}

std::vector<IterationRecord> read_iterations_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("iterations csv: empty file");
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw ParseError("iterations csv: expected 7 cells per row");
    IterationRecord rec;
    rec.phase = phase_from(cells[0]);
    rec.index = std::stoi(cells[1]);
    rec.cost = std::stod(cells[2]);
    rec.variance_term = std::stod(cells[3]);
    rec.control_term = std::stod(cells[4]);
    rec.relative_change =
        cells[5].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(cells[5]);
    rec.nonlinear_residual = std::stod(cells[6]);
    out.push_back(rec);
  }
  return out;
}

RateTable read_sweep_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("sweep csv: empty file");
  RateTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw ParseError("sweep csv: expected 7 cells per row");
    RateRow row;
    row.gamma = std::stod(cells[0]);
    row.cost = std::stod(cells[1]);
    row.variance_norm = std::stod(cells[2]);
    row.control_energy = std::stod(cells[3]);
    row.has_rates = !cells[4].empty();
    if (row.has_rates) {
      row.r_cost = std::stod(cells[4]);
      row.r_variance = std::stod(cells[5]);
      row.r_control = std::stod(cells[6]);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace convcool
