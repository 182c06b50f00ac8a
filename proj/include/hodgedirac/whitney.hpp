#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hodgedirac/linalg.hpp"
#include "hodgedirac/mesh.hpp"

namespace hodgedirac {

struct DegenerateTriangle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BoundaryCondition { Natural, Essential };

/// A smooth form given by coordinate functions: one component for degrees
/// 0 and 2 (for degree 2, the density g of g dx1^dx2), two components
/// (a1, a2) meaning a1 dx1 + a2 dx2 for degree 1.
struct AnalyticForm {
  int degree = 0;
  std::function<std::array<double, 2>(double, double)> eval;

  static AnalyticForm scalar(int degree, std::function<double(double, double)> f);
  static AnalyticForm one_form(std::function<double(double, double)> a1,
                               std::function<double(double, double)> a2);
  static AnalyticForm zero(int degree);
};

/// Symmetric triangle rule in barycentric coordinates; weights sum to one
/// (reference measure), so integral over T = |T| * sum w_q f(x_q).
struct TriangleQuadrature {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int exact_degree = 0;

  static const TriangleQuadrature& degree4();  // assembly default
  static const TriangleQuadrature& degree6();  // error integration
};

/// Gauss rule on [0,1]; used for oriented edge integrals.
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;

  static const EdgeQuadrature& gauss3();  // exact to degree 5
};

/// DOF indices kept under the given boundary condition, ascending.
/// Essential removes boundary vertices (k=0) and boundary edges (k=1);
/// 2-form DOFs are never eliminated.
std::vector<int> interior_dofs(const SimplicialMesh& mesh, int degree,
                               BoundaryCondition bc);

Vec expand_dofs(const SimplicialMesh& mesh, int degree, BoundaryCondition bc,
                const Vec& reduced);
Vec restrict_dofs(const SimplicialMesh& mesh, int degree, BoundaryCondition bc,
                  const Vec& full);

/// L2 Gram matrix of the degree-k Whitney basis: barycentric hats (k=0),
/// edge forms W_(i,j) = li d lj - lj d li (k=1), densities sign(T)/|T| with
/// unit integral over the index-oriented triangle (k=2, so the coboundary
/// stays purely combinatorial).  Essential boundary rows/columns are
/// eliminated.
SparseMat assemble_mass(const SimplicialMesh& mesh, int degree, BoundaryCondition bc);

/// Classical de Rham (interpolation) map on smooth inputs: DOF i is the
/// integral of the form over simplex i (point value at vertices for k=0).
/// Commutes with the coboundary on polynomial inputs up to quadrature
/// exactness.
Vec de_rham_map(const SimplicialMesh& mesh, const AnalyticForm& form,
                BoundaryCondition bc);

/// Weak right-hand side <f, phi_i> in the degree-k Whitney basis.
Vec load_vector(const SimplicialMesh& mesh, int degree, const AnalyticForm& f,
                BoundaryCondition bc,
                const TriangleQuadrature& quad = TriangleQuadrature::degree4());

/// Pointwise samples of the Whitney interpolant of a full-length cochain:
/// vertex values (k=0, one column), barycenter vectors (k=1, two columns),
/// per-triangle densities (k=2, one column).
DenseMat sample_field(const SimplicialMesh& mesh, int degree, const Vec& cochain);

/// L2 distance between the Whitney interpolant of a full-length cochain and
/// an analytic form, by elementwise quadrature.
double l2_error(const SimplicialMesh& mesh, int degree, const Vec& cochain,
                const AnalyticForm& exact,
                const TriangleQuadrature& quad = TriangleQuadrature::degree6());

double l2_norm(const SimplicialMesh& mesh, const AnalyticForm& form,
               const TriangleQuadrature& quad = TriangleQuadrature::degree6());

/// Wraps a cochain as an AnalyticForm by point location and Whitney
/// interpolation.  Intended for tests and small meshes; lookup is linear
/// in the triangle count.
AnalyticForm interpolant_form(const SimplicialMesh& mesh, int degree, Vec cochain);

}  // namespace hodgedirac
