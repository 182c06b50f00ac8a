#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "hodgedirac/linalg.hpp"

namespace hodgedirac {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Domain { Square, Disk, Annulus, External };

/// Oriented 2D simplicial complex.  Simplices are stored as strictly
/// increasing vertex tuples (the global orientation convention) and both
/// tables are sorted lexicographically, so incidence signs are canonical
/// and d.d = 0 holds structurally.
struct SimplicialMesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 2>> edges;      // v0 < v1
  std::vector<std::array<int, 3>> triangles;  // v0 < v1 < v2
  Domain domain_tag = Domain::External;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int simplex_count(int degree) const;

  /// Index of edge (a, b) in the sorted table; order of a and b irrelevant.
  int edge_index(int a, int b) const;

  /// Twice the signed area of a triangle (sign follows the index ordering,
  /// not a geometric orientation).
  double doubled_signed_area(int triangle) const;
};

/// Builds the edge table from the triangle table, sorts everything, and
/// validates the result.
SimplicialMesh mesh_from_tables(std::vector<std::array<double, 2>> vertices,
                                std::vector<std::array<int, 3>> triangles,
                                Domain tag = Domain::External);

/// Built-in generators.  Square: structured [0,1]^2, (n x n) x 2 triangles.
/// Disk: concentric rings, 6r vertices on ring r, outer ring exactly on the
/// unit circle.  Annulus: radii 0.5 and 1.0, n+1 rings of 8n vertices.
SimplicialMesh generate_mesh(Domain domain, int resolution);

/// Signed incidence matrix taking k-cochains to (k+1)-cochains; entries are
/// exactly -1, 0, +1.
SparseMat coboundary(const SimplicialMesh& mesh, int degree);

/// Boundary simplices: degree 1 gives edges bounding exactly one triangle,
/// degree 0 the vertices of those edges.  Sorted ascending.
std::vector<int> boundary_simplices(const SimplicialMesh& mesh, int degree);

/// Checks the structural invariants (sorted unique tables, edge closure,
/// each edge in one or two triangles, no degenerate triangles).  Throws
/// MeshError on violation.
void validate_mesh(const SimplicialMesh& mesh);

double max_edge_length(const SimplicialMesh& mesh);

}  // namespace hodgedirac
