#include "hodgedirac/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace hodgedirac {

AnalyticForm AnalyticForm::scalar(int degree, std::function<double(double, double)> f) {
  AnalyticForm form;
  form.degree = degree;
  form.eval = [fn = std::move(f)](double x, double y) {
    return std::array<double, 2>{fn(x, y), 0.0};
  };
  return form;
}

AnalyticForm AnalyticForm::one_form(std::function<double(double, double)> a1,
                                    std::function<double(double, double)> a2) {
  AnalyticForm form;
  form.degree = 1;
  form.eval = [f1 = std::move(a1), f2 = std::move(a2)](double x, double y) {
    return std::array<double, 2>{f1(x, y), f2(x, y)};
  };
  return form;
}

AnalyticForm AnalyticForm::zero(int degree) {
  AnalyticForm form;
  form.degree = degree;
  form.eval = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  return form;
}

const TriangleQuadrature& TriangleQuadrature::degree4() {
  // Dunavant order-4 rule, two symmetric orbits of three points.
  static const TriangleQuadrature rule = [] {
    TriangleQuadrature q;
    q.exact_degree = 4;
    const double a1 = 0.44594849091596488;
    const double w1 = 0.22338158967801147;
    const double a2 = 0.09157621350977074;
    const double w2 = 0.10995174365532187;
    for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const double b = 1.0 - 2.0 * a;
      q.points.push_back({b, a, a});
      q.points.push_back({a, b, a});
      q.points.push_back({a, a, b});
      q.weights.insert(q.weights.end(), 3, w);
    }
    return q;
  }();
  return rule;
}

const TriangleQuadrature& TriangleQuadrature::degree6() {
  // Dunavant order-6 rule, 12 points.
  static const TriangleQuadrature rule = [] {
    TriangleQuadrature q;
    q.exact_degree = 6;
    const double a1 = 0.24928674517091042;
    const double w1 = 0.11678627572637936;
    const double a2 = 0.06308901449150223;
    const double w2 = 0.05084490637020681;
    for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const double b = 1.0 - 2.0 * a;
      q.points.push_back({b, a, a});
      q.points.push_back({a, b, a});
      q.points.push_back({a, a, b});
      q.weights.insert(q.weights.end(), 3, w);
    }
    const double c1 = 0.31035245103378439;
    const double c2 = 0.05314504984481695;
    const double c3 = 1.0 - c1 - c2;
    const double w3 = 0.08285107561837358;
    q.points.push_back({c1, c2, c3});
    q.points.push_back({c2, c3, c1});
    q.points.push_back({c3, c1, c2});
    q.points.push_back({c1, c3, c2});
    q.points.push_back({c3, c2, c1});
    q.points.push_back({c2, c1, c3});
    q.weights.insert(q.weights.end(), 6, w3);
    return q;
  }();
  return rule;
}

const EdgeQuadrature& EdgeQuadrature::gauss3() {
  static const EdgeQuadrature rule = [] {
    EdgeQuadrature q;
    const double s = 0.5 * std::sqrt(0.6);
    q.points = {0.5 - s, 0.5, 0.5 + s};
    q.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return q;
  }();
  return rule;
}

namespace {

using Vec2 = Eigen::Vector2d;

// Affine geometry of one triangle: vertex positions, area, orientation
// sign, and the (constant) barycentric gradients.  `orient` is the sign of
// the index-ordered simplex relative to dx1^dx2; the degree-2 basis form
// carries it (density orient/|T|) so that the purely combinatorial
// incidence matrix is exactly the exterior derivative.
struct TriangleGeometry {
  std::array<int, 3> ids;
  std::array<Vec2, 3> pos;
  std::array<Vec2, 3> grad;
  double area = 0.0;
  double orient = 1.0;

  TriangleGeometry(const SimplicialMesh& mesh, int t) {
    ids = mesh.triangles[t];
    for (int l = 0; l < 3; ++l)
      pos[l] = Vec2(mesh.vertices[ids[l]][0], mesh.vertices[ids[l]][1]);
    const double det = mesh.doubled_signed_area(t);
    area = 0.5 * std::abs(det);
    orient = det >= 0.0 ? 1.0 : -1.0;
    if (area < 1e-14)
      throw DegenerateTriangle("triangle " + std::to_string(t) + " has |T| < 1e-14");
    grad[0] = Vec2(pos[1][1] - pos[2][1], pos[2][0] - pos[1][0]) / det;
    grad[1] = Vec2(pos[2][1] - pos[0][1], pos[0][0] - pos[2][0]) / det;
    grad[2] = Vec2(pos[0][1] - pos[1][1], pos[1][0] - pos[0][0]) / det;
  }

  Vec2 point(const std::array<double, 3>& bary) const {
    return bary[0] * pos[0] + bary[1] * pos[1] + bary[2] * pos[2];
  }

  // Whitney form of the local edge (a, b), a < b in local numbering, at a
  // barycentric point.  Matches the global (min, max) edge orientation
  // because local numbering follows the sorted global ids.
  Vec2 whitney(int a, int b, const std::array<double, 3>& bary) const {
    return bary[a] * grad[b] - bary[b] * grad[a];
  }
};

constexpr std::array<std::array<int, 2>, 3> kLocalEdges{{{0, 1}, {0, 2}, {1, 2}}};

std::vector<int> full_to_reduced(int full_count, const std::vector<int>& kept) {
  std::vector<int> map(static_cast<size_t>(full_count), -1);
  for (size_t r = 0; r < kept.size(); ++r) map[static_cast<size_t>(kept[r])] = static_cast<int>(r);
  return map;
}

}  // namespace

std::vector<int> interior_dofs(const SimplicialMesh& mesh, int degree,
                               BoundaryCondition bc) {
  const int count = mesh.simplex_count(degree);
  std::vector<int> all(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) all[static_cast<size_t>(i)] = i;
  if (bc == BoundaryCondition::Natural || degree == 2) return all;

  const std::vector<int> boundary = boundary_simplices(mesh, degree);
  std::vector<int> kept;
  kept.reserve(all.size() - boundary.size());
  std::set_difference(all.begin(), all.end(), boundary.begin(), boundary.end(),
                      std::back_inserter(kept));
  return kept;
}

Vec expand_dofs(const SimplicialMesh& mesh, int degree, BoundaryCondition bc,
                const Vec& reduced) {
  const std::vector<int> kept = interior_dofs(mesh, degree, bc);
  Vec full = Vec::Zero(mesh.simplex_count(degree));
  for (size_t r = 0; r < kept.size(); ++r) full[kept[r]] = reduced[static_cast<Eigen::Index>(r)];
  return full;
}

Vec restrict_dofs(const SimplicialMesh& mesh, int degree, BoundaryCondition bc,
                  const Vec& full) {
  const std::vector<int> kept = interior_dofs(mesh, degree, bc);
  Vec reduced(static_cast<Eigen::Index>(kept.size()));
  for (size_t r = 0; r < kept.size(); ++r) reduced[static_cast<Eigen::Index>(r)] = full[kept[r]];
  return reduced;
}

SparseMat assemble_mass(const SimplicialMesh& mesh, int degree, BoundaryCondition bc) {
  const std::vector<int> kept = interior_dofs(mesh, degree, bc);
  const std::vector<int> map = full_to_reduced(mesh.simplex_count(degree), kept);
  const int n = static_cast<int>(kept.size());
  std::vector<Eigen::Triplet<double>> triplets;

  if (degree == 0) {
    // int_T li lj = |T| (1 + delta_ij) / 12, exactly.
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry geo(mesh, t);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const int ra = map[static_cast<size_t>(geo.ids[a])];
          const int rb = map[static_cast<size_t>(geo.ids[b])];
          if (ra < 0 || rb < 0) continue;
          triplets.emplace_back(ra, rb, geo.area * (a == b ? 2.0 : 1.0) / 12.0);
        }
    }
  } else if (degree == 1) {
    const TriangleQuadrature& quad = TriangleQuadrature::degree4();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry geo(mesh, t);
      std::array<int, 3> edge_ids;
      for (int l = 0; l < 3; ++l)
        edge_ids[l] = mesh.edge_index(geo.ids[kLocalEdges[l][0]], geo.ids[kLocalEdges[l][1]]);
      std::array<std::array<double, 3>, 3> local{};
      for (size_t q = 0; q < quad.points.size(); ++q) {
        std::array<Vec2, 3> w;
        for (int l = 0; l < 3; ++l)
          w[l] = geo.whitney(kLocalEdges[l][0], kLocalEdges[l][1], quad.points[q]);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            local[a][b] += quad.weights[q] * w[a].dot(w[b]);
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const int ra = map[static_cast<size_t>(edge_ids[a])];
          const int rb = map[static_cast<size_t>(edge_ids[b])];
          if (ra < 0 || rb < 0) continue;
          triplets.emplace_back(ra, rb, geo.area * local[a][b]);
        }
    }
  } else if (degree == 2) {
    // Density orient/|T| with unit integral over the oriented simplex;
    // <phi_T, phi_T> = 1/|T| either way.
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry geo(mesh, t);
      triplets.emplace_back(t, t, 1.0 / geo.area);
    }
  } else {
    throw MeshError("assemble_mass: degree must be 0, 1 or 2");
  }

  SparseMat mass(n, n);
  mass.setFromTriplets(triplets.begin(), triplets.end());
  return mass;
}

Vec de_rham_map(const SimplicialMesh& mesh, const AnalyticForm& form,
                BoundaryCondition bc) {
  const int degree = form.degree;
  Vec full = Vec::Zero(mesh.simplex_count(degree));

  if (degree == 0) {
    for (int v = 0; v < mesh.vertex_count(); ++v)
      full[v] = form.eval(mesh.vertices[v][0], mesh.vertices[v][1])[0];
  } else if (degree == 1) {
    const EdgeQuadrature& quad = EdgeQuadrature::gauss3();
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const auto& a = mesh.vertices[mesh.edges[e][0]];
      const auto& b = mesh.vertices[mesh.edges[e][1]];
      const double dx = b[0] - a[0], dy = b[1] - a[1];
      double integral = 0.0;
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const double t = quad.points[q];
        const auto value = form.eval(a[0] + t * dx, a[1] + t * dy);
        integral += quad.weights[q] * (value[0] * dx + value[1] * dy);
      }
      full[e] = integral;
    }
  } else if (degree == 2) {
    // Signed integral over the index-oriented simplex.
    const TriangleQuadrature& quad = TriangleQuadrature::degree4();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry geo(mesh, t);
      double integral = 0.0;
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const Vec2 x = geo.point(quad.points[q]);
        integral += quad.weights[q] * form.eval(x[0], x[1])[0];
      }
      full[t] = geo.orient * geo.area * integral;
    }
  } else {
    throw MeshError("de_rham_map: degree must be 0, 1 or 2");
  }

  return restrict_dofs(mesh, degree, bc, full);
}

Vec load_vector(const SimplicialMesh& mesh, int degree, const AnalyticForm& f,
                BoundaryCondition bc, const TriangleQuadrature& quad) {
  if (f.degree != degree) throw MeshError("load_vector: form degree mismatch");
  Vec full = Vec::Zero(mesh.simplex_count(degree));

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry geo(mesh, t);
    if (degree == 0) {
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const Vec2 x = geo.point(quad.points[q]);
        const double v = f.eval(x[0], x[1])[0];
        for (int l = 0; l < 3; ++l)
          full[geo.ids[l]] += geo.area * quad.weights[q] * v * quad.points[q][l];
      }
    } else if (degree == 1) {
      std::array<int, 3> edge_ids;
      for (int l = 0; l < 3; ++l)
        edge_ids[l] = mesh.edge_index(geo.ids[kLocalEdges[l][0]], geo.ids[kLocalEdges[l][1]]);
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const Vec2 x = geo.point(quad.points[q]);
        const auto value = f.eval(x[0], x[1]);
        const Vec2 fv(value[0], value[1]);
        for (int l = 0; l < 3; ++l) {
          const Vec2 w = geo.whitney(kLocalEdges[l][0], kLocalEdges[l][1], quad.points[q]);
          full[edge_ids[l]] += geo.area * quad.weights[q] * fv.dot(w);
        }
      }
    } else if (degree == 2) {
      // <g dx^dy, phi_T> = (orient/|T|) int_T g.
      double integral = 0.0;
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const Vec2 x = geo.point(quad.points[q]);
        integral += quad.weights[q] * f.eval(x[0], x[1])[0];
      }
      full[t] = geo.orient * integral;
    } else {
      throw MeshError("load_vector: degree must be 0, 1 or 2");
    }
  }

  return restrict_dofs(mesh, degree, bc, full);
}

DenseMat sample_field(const SimplicialMesh& mesh, int degree, const Vec& cochain) {
  if (cochain.size() != mesh.simplex_count(degree))
    throw MeshError("sample_field: cochain length mismatch");

  if (degree == 0) return cochain;

  if (degree == 1) {
    const std::array<double, 3> center{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    DenseMat samples(mesh.triangle_count(), 2);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry geo(mesh, t);
      Vec2 value = Vec2::Zero();
      for (int l = 0; l < 3; ++l) {
        const int e = mesh.edge_index(geo.ids[kLocalEdges[l][0]], geo.ids[kLocalEdges[l][1]]);
        value += cochain[e] * geo.whitney(kLocalEdges[l][0], kLocalEdges[l][1], center);
      }
      samples.row(t) = value.transpose();
    }
    return samples;
  }

  if (degree == 2) {
    DenseMat samples(mesh.triangle_count(), 1);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry geo(mesh, t);
      samples(t, 0) = geo.orient * cochain[t] / geo.area;
    }
    return samples;
  }

  throw MeshError("sample_field: degree must be 0, 1 or 2");
}

double l2_error(const SimplicialMesh& mesh, int degree, const Vec& cochain,
                const AnalyticForm& exact, const TriangleQuadrature& quad) {
  if (exact.degree != degree) throw MeshError("l2_error: form degree mismatch");
  if (cochain.size() != mesh.simplex_count(degree))
    throw MeshError("l2_error: cochain length mismatch");

  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry geo(mesh, t);
    std::array<int, 3> edge_ids{};
    if (degree == 1)
      for (int l = 0; l < 3; ++l)
        edge_ids[l] = mesh.edge_index(geo.ids[kLocalEdges[l][0]], geo.ids[kLocalEdges[l][1]]);

    for (size_t q = 0; q < quad.points.size(); ++q) {
      const Vec2 x = geo.point(quad.points[q]);
      const auto value = exact.eval(x[0], x[1]);
      double err2 = 0.0;
      if (degree == 0) {
        double uh = 0.0;
        for (int l = 0; l < 3; ++l) uh += cochain[geo.ids[l]] * quad.points[q][l];
        err2 = (value[0] - uh) * (value[0] - uh);
      } else if (degree == 1) {
        Vec2 uh = Vec2::Zero();
        for (int l = 0; l < 3; ++l)
          uh += cochain[edge_ids[l]] * geo.whitney(kLocalEdges[l][0], kLocalEdges[l][1], quad.points[q]);
        err2 = (Vec2(value[0], value[1]) - uh).squaredNorm();
      } else {
        const double uh = geo.orient * cochain[t] / geo.area;
        err2 = (value[0] - uh) * (value[0] - uh);
      }
      sum += geo.area * quad.weights[q] * err2;
    }
  }
  return std::sqrt(sum);
}

double l2_norm(const SimplicialMesh& mesh, const AnalyticForm& form,
               const TriangleQuadrature& quad) {
  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry geo(mesh, t);
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const Vec2 x = geo.point(quad.points[q]);
      const auto value = form.eval(x[0], x[1]);
      const double f2 = form.degree == 1 ? value[0] * value[0] + value[1] * value[1]
                                         : value[0] * value[0];
      sum += geo.area * quad.weights[q] * f2;
    }
  }
  return std::sqrt(sum);
}

AnalyticForm interpolant_form(const SimplicialMesh& mesh, int degree, Vec cochain) {
  if (cochain.size() != mesh.simplex_count(degree))
    throw MeshError("interpolant_form: cochain length mismatch");

  auto data = std::make_shared<std::pair<SimplicialMesh, Vec>>(mesh, std::move(cochain));
  AnalyticForm form;
  form.degree = degree;
  form.eval = [data, degree](double x, double y) -> std::array<double, 2> {
    const SimplicialMesh& m = data->first;
    const Vec& c = data->second;
    constexpr double slack = 1e-12;
    for (int t = 0; t < m.triangle_count(); ++t) {
      const TriangleGeometry geo(m, t);
      // Barycentric coordinates of (x, y).
      const Vec2 p(x, y);
      std::array<double, 3> bary{};
      for (int l = 0; l < 3; ++l) bary[l] = 1.0 / 3.0 + geo.grad[l].dot(p - geo.point({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));
      if (bary[0] < -slack || bary[1] < -slack || bary[2] < -slack) continue;
      if (degree == 0) {
        double v = 0.0;
        for (int l = 0; l < 3; ++l) v += c[geo.ids[l]] * bary[l];
        return {v, 0.0};
      }
      if (degree == 1) {
        Vec2 v = Vec2::Zero();
        for (int l = 0; l < 3; ++l) {
          const int e = m.edge_index(geo.ids[kLocalEdges[l][0]], geo.ids[kLocalEdges[l][1]]);
          v += c[e] * geo.whitney(kLocalEdges[l][0], kLocalEdges[l][1], bary);
        }
        return {v[0], v[1]};
      }
      return {geo.orient * c[t] / geo.area, 0.0};
    }
    throw MeshError("interpolant_form: point outside the mesh");
  };
  return form;
}

}  // namespace hodgedirac
