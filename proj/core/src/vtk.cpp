#include "vfrac/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace vfrac {

namespace {

void write_section(std::ostream& os, const std::vector<VtkField>& fields, std::size_t count) {
  for (const auto& f : fields) {
    if (f.components != 1 && f.components != 2) throw std::invalid_argument("vtk: field '" + f.name + "' must have 1 or 2 components");
    if (f.values.size() != count * static_cast<std::size_t>(f.components)) {
      throw std::invalid_argument("vtk: field '" + f.name + "' has the wrong length");
    }
    if (f.components == 1) {
      os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) os << v << '\n';
    } else {
      os << "VECTORS " << f.name << " double\n";
      for (std::size_t i = 0; i < count; ++i) os << f.values[2 * i] << ' ' << f.values[2 * i + 1] << " 0\n";
    }
  }
}

}  // namespace

void write_vtk(std::ostream& os, const TriMesh& mesh, const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields, const std::string& title) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.node_count() << " double\n";
  for (const auto& p : mesh.nodes) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (std::size_t e = 0; e < mesh.triangle_count(); ++e) os << "5\n";
  if (!point_fields.empty()) {
    os << "POINT_DATA " << mesh.node_count() << '\n';
    write_section(os, point_fields, mesh.node_count());
  }
  if (!cell_fields.empty()) {
    os << "CELL_DATA " << mesh.triangle_count() << '\n';
    write_section(os, cell_fields, mesh.triangle_count());
  }
}

void write_vtk_file(const std::string& path, const TriMesh& mesh, const std::vector<VtkField>& point_fields,
                    const std::vector<VtkField>& cell_fields, const std::string& title) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("vtk: cannot open " + path);
  write_vtk(os, mesh, point_fields, cell_fields, title);
  if (!os) throw std::runtime_error("vtk: write failed for " + path);
}

}  // namespace vfrac
