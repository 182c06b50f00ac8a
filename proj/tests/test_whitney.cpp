#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "hodgedirac/whitney.hpp"

using namespace hodgedirac;

namespace {

SimplicialMesh unit_right_triangle() {
  return mesh_from_tables({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {{0, 1, 2}});
}

double mass_condition(const SparseMat& m) {
  const DenseMat dense(m);
  Eigen::SelfAdjointEigenSolver<DenseMat> eig(dense);
  return eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("quadrature rules are normalized and symmetric") {
  for (const TriangleQuadrature* quad :
       {&TriangleQuadrature::degree4(), &TriangleQuadrature::degree6()}) {
    double sum = 0.0;
    for (double w : quad->weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& p : quad->points)
      CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-12));
  }
  double esum = 0.0;
  for (double w : EdgeQuadrature::gauss3().weights) esum += w;
  CHECK(esum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("triangle rules integrate monomials exactly to their stated degree") {
  // On the unit right triangle, int x^a y^b = a! b! / (a+b+2)!.
  const auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  const SimplicialMesh tri = unit_right_triangle();
  for (const TriangleQuadrature* quad :
       {&TriangleQuadrature::degree4(), &TriangleQuadrature::degree6()}) {
    for (int a = 0; a + 0 <= quad->exact_degree; ++a)
      for (int b = 0; a + b <= quad->exact_degree; ++b) {
        double sum = 0.0;
        for (size_t q = 0; q < quad->points.size(); ++q) {
          // Vertices (0,0), (1,0), (0,1): x = l1, y = l2.
          const double x = quad->points[q][1];
          const double y = quad->points[q][2];
          sum += quad->weights[q] * std::pow(x, a) * std::pow(y, b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(0.5 * sum == doctest::Approx(exact).epsilon(1e-13));
      }
  }

  // Gauss rule on [0,1]: int t^k = 1/(k+1) up to degree 5.
  const EdgeQuadrature& edge = EdgeQuadrature::gauss3();
  for (int k = 0; k <= 5; ++k) {
    double sum = 0.0;
    for (size_t q = 0; q < edge.points.size(); ++q)
      sum += edge.weights[q] * std::pow(edge.points[q], k);
    CHECK(sum == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
  }
}

TEST_CASE("0-form mass on the unit right triangle") {
  const SimplicialMesh tri = unit_right_triangle();
  const DenseMat m = DenseMat(assemble_mass(tri, 0, BoundaryCondition::Natural));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(m(i, j) == doctest::Approx(i == j ? 1.0 / 12.0 : 1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("2-form mass on the unit right triangle") {
  const SimplicialMesh tri = unit_right_triangle();
  const DenseMat m = DenseMat(assemble_mass(tri, 2, BoundaryCondition::Natural));
  REQUIRE(m.rows() == 1);
  CHECK(m(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("1-form mass on the unit right triangle matches barycentric integrals") {
  // Rows ordered (0,1), (0,2), (1,2); entries from int li lj = |T|(1+d)/12.
  const SimplicialMesh tri = unit_right_triangle();
  const DenseMat m = DenseMat(assemble_mass(tri, 1, BoundaryCondition::Natural));
  DenseMat expected(3, 3);
  expected << 1.0 / 3.0, 1.0 / 6.0, 0.0, 1.0 / 6.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 6.0;
  CHECK((m - expected).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("negatively index-oriented triangles keep the signed 2-form convention") {
  // Tuple (0,1,2) has negative signed area for this vertex placement.
  const SimplicialMesh tri =
      mesh_from_tables({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}, {{0, 1, 2}});
  REQUIRE(tri.doubled_signed_area(0) < 0.0);

  const AnalyticForm one = AnalyticForm::scalar(2, [](double, double) { return 1.0; });
  const Vec dof = de_rham_map(tri, one, BoundaryCondition::Natural);
  CHECK(dof[0] == doctest::Approx(-0.5).epsilon(1e-14));  // signed integral
  CHECK(sample_field(tri, 2, dof)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l2_error(tri, 2, dof, one) <= 1e-14);

  // Stokes still pairs the combinatorial incidence with the signed DOF.
  const SparseMat d1 = coboundary(tri, 1);
  const Vec pu = de_rham_map(tri, AnalyticForm::one_form([](double, double y) { return -y; },
                                                         [](double x, double) { return x; }),
                             BoundaryCondition::Natural);
  const Vec pdu = de_rham_map(tri, AnalyticForm::scalar(2, [](double, double) { return 2.0; }),
                              BoundaryCondition::Natural);
  CHECK((d1 * pu - pdu).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("mass matrices are symmetric positive definite") {
  const SimplicialMesh mesh = generate_mesh(Domain::Disk, 2);
  for (int k = 0; k < 3; ++k) {
    for (const BoundaryCondition bc : {BoundaryCondition::Natural, BoundaryCondition::Essential}) {
      const SparseMat m = assemble_mass(mesh, k, bc);
      const DenseMat dense(m);
      CHECK((dense - dense.transpose()).norm() <= 1e-14 * dense.norm());
      Eigen::SelfAdjointEigenSolver<DenseMat> eig(dense);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("mass condition number is stable under refinement") {
  for (int k = 0; k < 3; ++k) {
    const double c1 = mass_condition(assemble_mass(generate_mesh(Domain::Square, 4), k,
                                                   BoundaryCondition::Natural));
    const double c2 = mass_condition(assemble_mass(generate_mesh(Domain::Square, 8), k,
                                                   BoundaryCondition::Natural));
    CHECK(std::max(c1, c2) / std::min(c1, c2) < 10.0);
  }
}

TEST_CASE("de Rham map basics") {
  const SimplicialMesh mesh = generate_mesh(Domain::Square, 2);

  const Vec ones = de_rham_map(mesh, AnalyticForm::scalar(0, [](double, double) { return 1.0; }),
                               BoundaryCondition::Natural);
  CHECK((ones - Vec::Ones(mesh.vertex_count())).norm() == 0.0);

  // dx1 integrates to the x-extent of each edge.
  const SimplicialMesh tri = unit_right_triangle();
  const Vec dx1 = de_rham_map(tri, AnalyticForm::one_form([](double, double) { return 1.0; },
                                                          [](double, double) { return 0.0; }),
                              BoundaryCondition::Natural);
  CHECK(dx1[tri.edge_index(0, 1)] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dx1[tri.edge_index(0, 2)] == doctest::Approx(0.0));
  CHECK(dx1[tri.edge_index(1, 2)] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("commutation D pi_h = pi_h d for polynomial forms") {
  const SimplicialMesh mesh = generate_mesh(Domain::Square, 3);
  const SparseMat d0 = coboundary(mesh, 0);
  const SparseMat d1 = coboundary(mesh, 1);
  const auto bc = BoundaryCondition::Natural;

  // f(x,y) = x*y, df = y dx + x dy.
  const Vec pf = de_rham_map(mesh, AnalyticForm::scalar(0, [](double x, double y) { return x * y; }), bc);
  const Vec pdf = de_rham_map(mesh, AnalyticForm::one_form([](double, double y) { return y; },
                                                           [](double x, double) { return x; }),
                              bc);
  CHECK((d0 * pf - pdf).lpNorm<Eigen::Infinity>() <= 1e-13);

  // Cubic 1-form u = (x^2 y, -x y^2), du = (-y^2 - x^2) dx^dy.
  const Vec pu = de_rham_map(mesh, AnalyticForm::one_form([](double x, double y) { return x * x * y; },
                                                          [](double x, double y) { return -x * y * y; }),
                             bc);
  const Vec pdu = de_rham_map(mesh, AnalyticForm::scalar(2, [](double x, double y) {
                                return -y * y - x * x;
                              }),
                              bc);
  CHECK((d1 * pu - pdu).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("load vectors") {
  const SimplicialMesh tri = unit_right_triangle();

  const Vec zero = load_vector(tri, 0, AnalyticForm::zero(0), BoundaryCondition::Natural);
  CHECK(zero.norm() == 0.0);

  const Vec hat = load_vector(tri, 0, AnalyticForm::scalar(0, [](double, double) { return 1.0; }),
                              BoundaryCondition::Natural);
  for (int i = 0; i < 3; ++i) CHECK(hat[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  // <g dx^dy, phi_T> = (1/|T|) int_T x*y = 2 * 1/24 on the unit right triangle.
  const Vec curl = load_vector(tri, 2, AnalyticForm::scalar(2, [](double x, double y) { return x * y; }),
                               BoundaryCondition::Natural);
  CHECK(curl[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("sampling reproduces constant 1-forms") {
  const SimplicialMesh mesh = generate_mesh(Domain::Disk, 2);
  const Vec zero = Vec::Zero(mesh.edge_count());
  CHECK(sample_field(mesh, 1, zero).norm() == 0.0);

  const Vec dx1 = de_rham_map(mesh, AnalyticForm::one_form([](double, double) { return 1.0; },
                                                           [](double, double) { return 0.0; }),
                              BoundaryCondition::Natural);
  const DenseMat samples = sample_field(mesh, 1, dx1);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    CHECK(samples(t, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(samples(t, 1)) <= 1e-12);
  }

  Vec vertex_values(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) vertex_values[v] = 0.5 * v;
  CHECK((sample_field(mesh, 0, vertex_values) - vertex_values).norm() == 0.0);
}

TEST_CASE("de Rham map inverts Whitney interpolation") {
  const SimplicialMesh mesh = generate_mesh(Domain::Disk, 2);
  std::mt19937 rng(99u);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 3; ++k) {
    Vec c(mesh.simplex_count(k));
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = gauss(rng);
    const AnalyticForm interp = interpolant_form(mesh, k, c);
    const Vec back = de_rham_map(mesh, interp, BoundaryCondition::Natural);
    CHECK((back - c).lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, c.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("essential boundary conditions eliminate boundary DOFs") {
  const SimplicialMesh mesh = generate_mesh(Domain::Square, 2);
  const auto bc = BoundaryCondition::Essential;
  CHECK(interior_dofs(mesh, 0, bc).size() == 1);   // the center vertex
  CHECK(interior_dofs(mesh, 2, bc).size() == 8);   // 2-forms keep everything
  CHECK(static_cast<int>(interior_dofs(mesh, 1, bc).size()) ==
        mesh.edge_count() - static_cast<int>(boundary_simplices(mesh, 1).size()));

  const Vec reduced = de_rham_map(mesh, AnalyticForm::scalar(0, [](double, double) { return 3.0; }), bc);
  CHECK(reduced.size() == 1);
  const Vec full = expand_dofs(mesh, 0, bc, reduced);
  CHECK(full.size() == mesh.vertex_count());
  CHECK(full.sum() == doctest::Approx(3.0));  // zeros everywhere but the center
}

TEST_CASE("degenerate triangles are rejected at assembly") {
  SimplicialMesh bad;
  bad.vertices = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 1e-16}};
  bad.edges = {{0, 1}, {0, 2}, {1, 2}};
  bad.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(assemble_mass(bad, 0, BoundaryCondition::Natural), DegenerateTriangle);
}

TEST_CASE("l2 norm and error agree with closed forms") {
  const SimplicialMesh mesh = generate_mesh(Domain::Square, 4);
  const AnalyticForm f = AnalyticForm::scalar(0, [](double x, double) { return x; });
  CHECK(l2_norm(mesh, f) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

  // The interpolant of an affine function is exact.
  const Vec c = de_rham_map(mesh, f, BoundaryCondition::Natural);
  CHECK(l2_error(mesh, 0, c, f) <= 1e-13);
}
