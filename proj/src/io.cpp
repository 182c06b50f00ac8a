#include "hodgedirac/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hodgedirac {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_mesh(std::ostream& out, const SimplicialMesh& mesh) {
  out << "mesh2d " << mesh.vertex_count() << ' ' << mesh.edge_count() << ' '
      << mesh.triangle_count() << '\n';
  for (const auto& v : mesh.vertices)
    out << format_g17(v[0]) << ' ' << format_g17(v[1]) << '\n';
  for (const auto& e : mesh.edges) out << e[0] << ' ' << e[1] << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

namespace {

// Token stream over the input with `#` comments stripped.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string token;
    while (buffer_ >> token) {
      return token;
    }
    std::string line;
    while (std::getline(in_, line)) {
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      buffer_.clear();
      buffer_.str(line);
      if (buffer_ >> token) return token;
    }
    throw IoError(std::string("mesh read: unexpected end of input, wanted ") + what);
  }

  int next_int(const char* what) {
    const std::string token = next(what);
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw IoError(std::string("mesh read: '") + token + "' is not an integer (" + what + ")");
    }
    if (used != token.size())
      throw IoError(std::string("mesh read: '") + token + "' is not an integer (" + what + ")");
    return value;
  }

  double next_real(const char* what) {
    const std::string token = next(what);
    size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw IoError(std::string("mesh read: '") + token + "' is not a number (" + what + ")");
    }
    if (used != token.size())
      throw IoError(std::string("mesh read: '") + token + "' is not a number (" + what + ")");
    return value;
  }

 private:
  std::istream& in_;
  std::istringstream buffer_;
};

}  // namespace

SimplicialMesh read_mesh(std::istream& in) {
  TokenReader reader(in);
  if (reader.next("header 'mesh2d'") != "mesh2d")
    throw IoError("mesh read: missing 'mesh2d' header");
  const int nv = reader.next_int("vertex count");
  const int ne = reader.next_int("edge count");
  const int nf = reader.next_int("triangle count");
  if (nv < 0 || ne < 0 || nf < 0) throw IoError("mesh read: negative count");

  SimplicialMesh mesh;
  mesh.domain_tag = Domain::External;
  mesh.vertices.reserve(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    const double x = reader.next_real("vertex x");
    const double y = reader.next_real("vertex y");
    mesh.vertices.push_back({x, y});
  }
  for (int i = 0; i < ne; ++i) {
    const int a = reader.next_int("edge v0");
    const int b = reader.next_int("edge v1");
    mesh.edges.push_back(a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a});
  }
  for (int i = 0; i < nf; ++i) {
    std::array<int, 3> t{reader.next_int("tri v0"), reader.next_int("tri v1"),
                         reader.next_int("tri v2")};
    std::sort(t.begin(), t.end());
    mesh.triangles.push_back(t);
  }

  std::sort(mesh.edges.begin(), mesh.edges.end());
  std::sort(mesh.triangles.begin(), mesh.triangles.end());
  validate_mesh(mesh);
  return mesh;
}

void write_mesh_file(const std::string& path, const SimplicialMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_mesh(out, mesh);
  if (!out) throw IoError("write failed for '" + path + "'");
}

SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_mesh(in);
}

namespace {

void write_vtk_field(std::ostream& out, const VtkField& field) {
  if (field.values.cols() == 2) {
    out << "VECTORS " << field.name << " double\n";
    for (Eigen::Index i = 0; i < field.values.rows(); ++i)
      out << format_g17(field.values(i, 0)) << ' ' << format_g17(field.values(i, 1)) << " 0\n";
  } else {
    out << "SCALARS " << field.name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < field.values.rows(); ++i)
      out << format_g17(field.values(i, 0)) << '\n';
  }
}

}  // namespace

void write_vtk(std::ostream& out, const SimplicialMesh& mesh,
               const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields, const std::string& title) {
  out << "# vtk DataFile Version 2.0\n";
  out << title << '\n';
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& v : mesh.vertices)
    out << format_g17(v[0]) << ' ' << format_g17(v[1]) << " 0\n";
  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";

  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.vertex_count() << '\n';
    for (const auto& field : point_fields) {
      if (field.values.rows() != mesh.vertex_count())
        throw IoError("write_vtk: point field '" + field.name + "' has wrong length");
      write_vtk_field(out, field);
    }
  }
  if (!cell_fields.empty()) {
    out << "CELL_DATA " << mesh.triangle_count() << '\n';
    for (const auto& field : cell_fields) {
      if (field.values.rows() != mesh.triangle_count())
        throw IoError("write_vtk: cell field '" + field.name + "' has wrong length");
      write_vtk_field(out, field);
    }
  }
}

void write_vtk_file(const std::string& path, const SimplicialMesh& mesh,
                    const std::vector<VtkField>& point_fields,
                    const std::vector<VtkField>& cell_fields, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_vtk(out, mesh, point_fields, cell_fields, title);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace hodgedirac
