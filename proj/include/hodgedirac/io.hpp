#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hodgedirac/linalg.hpp"
#include "hodgedirac/mesh.hpp"

namespace hodgedirac {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed float formatting used by every emitter: 17 significant digits, so
/// identical inputs produce byte-identical files.
std::string format_g17(double value);

/// Mesh text format: header `mesh2d <V> <E> <F>`, then vertex, edge and
/// triangle lines; whitespace separated, `#` starts a comment.
void write_mesh(std::ostream& out, const SimplicialMesh& mesh);
SimplicialMesh read_mesh(std::istream& in);

void write_mesh_file(const std::string& path, const SimplicialMesh& mesh);
SimplicialMesh read_mesh_file(const std::string& path);

/// Named data attached to a VTK output; scalars carry one column, vectors
/// two (a zero z-component is appended on write).
struct VtkField {
  std::string name;
  DenseMat values;
};

/// Legacy ASCII VTK v2.0 unstructured grid of triangles (cell type 5),
/// with optional point scalars and cell scalars/vectors.
void write_vtk(std::ostream& out, const SimplicialMesh& mesh,
               const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields,
               const std::string& title = "hodgedirac output");

void write_vtk_file(const std::string& path, const SimplicialMesh& mesh,
                    const std::vector<VtkField>& point_fields,
                    const std::vector<VtkField>& cell_fields,
                    const std::string& title = "hodgedirac output");

}  // namespace hodgedirac
