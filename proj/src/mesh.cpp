#include "hodgedirac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace hodgedirac {

namespace {

constexpr double kDegenerateArea = 1e-14;

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

std::array<int, 3> sorted_triple(int a, int b, int c) {
  std::array<int, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

int SimplicialMesh::simplex_count(int degree) const {
  switch (degree) {
    case 0: return vertex_count();
    case 1: return edge_count();
    case 2: return triangle_count();
    default: throw MeshError("simplex_count: degree must be 0, 1 or 2");
  }
}

int SimplicialMesh::edge_index(int a, int b) const {
  const std::array<int, 2> key = sorted_pair(a, b);
  const auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key)
    throw MeshError("edge_index: edge (" + std::to_string(key[0]) + "," +
                    std::to_string(key[1]) + ") not in table");
  return static_cast<int>(it - edges.begin());
}

double SimplicialMesh::doubled_signed_area(int triangle) const {
  const auto& t = triangles[triangle];
  const auto& p0 = vertices[t[0]];
  const auto& p1 = vertices[t[1]];
  const auto& p2 = vertices[t[2]];
  return (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
}

SimplicialMesh mesh_from_tables(std::vector<std::array<double, 2>> vertices,
                                std::vector<std::array<int, 3>> triangles,
                                Domain tag) {
  SimplicialMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.domain_tag = tag;

  for (auto& t : triangles) t = sorted_triple(t[0], t[1], t[2]);
  std::sort(triangles.begin(), triangles.end());
  mesh.triangles = std::move(triangles);

  std::set<std::array<int, 2>> edge_set;
  for (const auto& t : mesh.triangles) {
    edge_set.insert({t[0], t[1]});
    edge_set.insert({t[0], t[2]});
    edge_set.insert({t[1], t[2]});
  }
  mesh.edges.assign(edge_set.begin(), edge_set.end());

  validate_mesh(mesh);
  return mesh;
}

namespace {

SimplicialMesh make_square(int n) {
  std::vector<std::array<double, 2>> vertices;
  vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<size_t>(2) * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j);
      const int c = vid(i, j + 1), d = vid(i + 1, j + 1);
      triangles.push_back({a, b, d});
      triangles.push_back({a, c, d});
    }
  return mesh_from_tables(std::move(vertices), std::move(triangles), Domain::Square);
}

// Triangulates the strip between two concentric vertex rings by walking
// both rings in angle order.
void triangulate_strip(const std::vector<int>& inner, const std::vector<int>& outer,
                       std::vector<std::array<int, 3>>& triangles) {
  const int ni = static_cast<int>(inner.size());
  const int no = static_cast<int>(outer.size());
  int i = 0, j = 0;
  while (i < ni || j < no) {
    const double next_inner = (i + 1) * 2.0 * std::numbers::pi / ni;
    const double next_outer = (j + 1) * 2.0 * std::numbers::pi / no;
    const bool advance_inner = (j >= no) || (i < ni && next_inner <= next_outer);
    if (advance_inner) {
      triangles.push_back({inner[i % ni], inner[(i + 1) % ni], outer[j % no]});
      ++i;
    } else {
      triangles.push_back({inner[i % ni], outer[j % no], outer[(j + 1) % no]});
      ++j;
    }
  }
}

SimplicialMesh make_disk(int n) {
  std::vector<std::array<double, 2>> vertices{{0.0, 0.0}};
  std::vector<std::vector<int>> rings;
  for (int r = 1; r <= n; ++r) {
    const int count = 6 * r;
    const double radius = static_cast<double>(r) / n;
    std::vector<int> ring(count);
    for (int k = 0; k < count; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / count;
      ring[k] = static_cast<int>(vertices.size());
      vertices.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    rings.push_back(std::move(ring));
  }

  std::vector<std::array<int, 3>> triangles;
  const auto& first = rings[0];
  for (int k = 0; k < 6; ++k) triangles.push_back({0, first[k], first[(k + 1) % 6]});
  for (int r = 1; r < n; ++r) triangulate_strip(rings[r - 1], rings[r], triangles);

  return mesh_from_tables(std::move(vertices), std::move(triangles), Domain::Disk);
}

SimplicialMesh make_annulus(int n) {
  const int count = 8 * n;
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::vector<int>> rings;
  for (int r = 0; r <= n; ++r) {
    const double radius = 0.5 + 0.5 * r / n;
    std::vector<int> ring(count);
    for (int k = 0; k < count; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / count;
      ring[k] = static_cast<int>(vertices.size());
      vertices.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    rings.push_back(std::move(ring));
  }

  std::vector<std::array<int, 3>> triangles;
  for (int r = 0; r < n; ++r) {
    const auto& inner = rings[r];
    const auto& outer = rings[r + 1];
    for (int k = 0; k < count; ++k) {
      const int k1 = (k + 1) % count;
      triangles.push_back({inner[k], inner[k1], outer[k1]});
      triangles.push_back({inner[k], outer[k1], outer[k]});
    }
  }

  return mesh_from_tables(std::move(vertices), std::move(triangles), Domain::Annulus);
}

}  // namespace

SimplicialMesh generate_mesh(Domain domain, int resolution) {
  if (resolution < 1) throw MeshError("generate_mesh: resolution must be >= 1");
  switch (domain) {
    case Domain::Square: return make_square(resolution);
    case Domain::Disk: return make_disk(resolution);
    case Domain::Annulus: return make_annulus(resolution);
    default: throw MeshError("generate_mesh: no generator for external domains");
  }
}

SparseMat coboundary(const SimplicialMesh& mesh, int degree) {
  std::vector<Eigen::Triplet<double>> triplets;
  if (degree == 0) {
    // Row for edge (i, j): -1 at i, +1 at j.
    triplets.reserve(static_cast<size_t>(2) * mesh.edges.size());
    for (int e = 0; e < mesh.edge_count(); ++e) {
      triplets.emplace_back(e, mesh.edges[e][0], -1.0);
      triplets.emplace_back(e, mesh.edges[e][1], 1.0);
    }
    SparseMat d(mesh.edge_count(), mesh.vertex_count());
    d.setFromTriplets(triplets.begin(), triplets.end());
    return d;
  }
  if (degree == 1) {
    // Row for triangle (i, j, k): +1 on (j,k), -1 on (i,k), +1 on (i,j).
    triplets.reserve(static_cast<size_t>(3) * mesh.triangles.size());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles[t];
      triplets.emplace_back(t, mesh.edge_index(tri[1], tri[2]), 1.0);
      triplets.emplace_back(t, mesh.edge_index(tri[0], tri[2]), -1.0);
      triplets.emplace_back(t, mesh.edge_index(tri[0], tri[1]), 1.0);
    }
    SparseMat d(mesh.triangle_count(), mesh.edge_count());
    d.setFromTriplets(triplets.begin(), triplets.end());
    return d;
  }
  throw MeshError("coboundary: degree must be 0 or 1");
}

namespace {

std::vector<int> edge_triangle_counts(const SimplicialMesh& mesh) {
  std::vector<int> counts(mesh.edges.size(), 0);
  for (const auto& t : mesh.triangles) {
    ++counts[static_cast<size_t>(mesh.edge_index(t[0], t[1]))];
    ++counts[static_cast<size_t>(mesh.edge_index(t[0], t[2]))];
    ++counts[static_cast<size_t>(mesh.edge_index(t[1], t[2]))];
  }
  return counts;
}

}  // namespace

std::vector<int> boundary_simplices(const SimplicialMesh& mesh, int degree) {
  if (degree != 0 && degree != 1)
    throw MeshError("boundary_simplices: degree must be 0 or 1");
  const std::vector<int> counts = edge_triangle_counts(mesh);
  if (degree == 1) {
    std::vector<int> out;
    for (int e = 0; e < mesh.edge_count(); ++e)
      if (counts[static_cast<size_t>(e)] == 1) out.push_back(e);
    return out;
  }
  std::set<int> verts;
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (counts[static_cast<size_t>(e)] == 1) {
      verts.insert(mesh.edges[e][0]);
      verts.insert(mesh.edges[e][1]);
    }
  return {verts.begin(), verts.end()};
}

void validate_mesh(const SimplicialMesh& mesh) {
  const int nv = mesh.vertex_count();
  for (const auto& v : mesh.vertices)
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
      throw MeshError("validate_mesh: non-finite vertex coordinate");

  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto& edge = mesh.edges[e];
    if (edge[0] < 0 || edge[1] >= nv) throw MeshError("validate_mesh: edge index out of range");
    if (edge[0] >= edge[1]) throw MeshError("validate_mesh: edge not strictly increasing");
    if (e > 0 && !(mesh.edges[e - 1] < edge))
      throw MeshError("validate_mesh: edge table not sorted or not unique");
  }

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (tri[0] < 0 || tri[2] >= nv) throw MeshError("validate_mesh: triangle index out of range");
    if (!(tri[0] < tri[1] && tri[1] < tri[2]))
      throw MeshError("validate_mesh: triangle not strictly increasing");
    if (t > 0 && !(mesh.triangles[t - 1] < tri))
      throw MeshError("validate_mesh: triangle table not sorted or not unique");
    if (std::abs(mesh.doubled_signed_area(static_cast<int>(t))) < 2.0 * kDegenerateArea)
      throw MeshError("validate_mesh: degenerate (zero-area) triangle");
  }

  // Edge closure and the manifold-with-boundary condition.
  const std::vector<int> counts = edge_triangle_counts(mesh);  // throws if an edge is missing
  for (size_t e = 0; e < counts.size(); ++e) {
    if (counts[e] == 0)
      throw MeshError("validate_mesh: edge " + std::to_string(e) + " bounds no triangle");
    if (counts[e] > 2)
      throw MeshError("validate_mesh: edge " + std::to_string(e) + " bounds more than two triangles");
  }
}

double max_edge_length(const SimplicialMesh& mesh) {
  double h = 0.0;
  for (const auto& e : mesh.edges) {
    const auto& a = mesh.vertices[e[0]];
    const auto& b = mesh.vertices[e[1]];
    h = std::max(h, std::hypot(b[0] - a[0], b[1] - a[1]));
  }
  return h;
}

}  // namespace hodgedirac
