#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vfrac/mesh.hpp"

namespace vfrac {

/// A named field attached to a VTK snapshot.
struct VtkField {
  std::string name;
  int components = 1;  ///< 1 (SCALARS) or 2 (written as 3-component VECTORS)
  std::vector<double> values;
};

/// Legacy-VTK ASCII UNSTRUCTURED_GRID with POINT_DATA and CELL_DATA sections.
void write_vtk(std::ostream& os, const TriMesh& mesh, const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields, const std::string& title = "vfrac");

void write_vtk_file(const std::string& path, const TriMesh& mesh, const std::vector<VtkField>& point_fields,
                    const std::vector<VtkField>& cell_fields, const std::string& title = "vfrac");

}  // namespace vfrac
