#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hodgedirac/solvers.hpp"

namespace hodgedirac {

struct EmptyComplement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// (W-norm, V-norm) of a graded cochain; the V-norm is the graph norm
/// sqrt(|x|_W^2 + |Dx|_W^2).
std::pair<double, double> norms(const GradedComplex& complex, const Cochain& x);

/// Discrete Poincare constant: the largest |v|_V / |Dv|_W over the
/// M-orthogonal complement of ker(D), computed as sqrt(1 + 1/lambda_min)
/// from the smallest nonzero eigenvalue of (D^T M D, M).  Throws
/// EmptyComplement when ker(D) is the whole space.
double poincare_constant(const GradedComplex& complex);

/// Discrete inf-sup constant of the Dirac saddle form: smallest |lambda|
/// of G x = lambda N x with G the saddle matrix and N the Gram matrix of
/// the (V x harmonic) norm.
double infsup_constant(const GradedComplex& complex);

struct StabilityConstants {
  double c_P = 0.0;
  double gamma_h = 0.0;
  double h = 0.0;
  std::array<int, 3> dims{};
};

StabilityConstants stability_constants(const GradedComplex& complex);

/// Best-approximation error E(w) = |w - P_h w|_W, with P_h the
/// M-orthogonal projection onto the discrete space, assembled with the
/// given quadrature.
double best_approx_error(const GradedComplex& complex, const AnalyticForm& w,
                         const TriangleQuadrature& quad = TriangleQuadrature::degree6());

/// Manufactured problem: an exact graded solution with its exterior
/// derivative and the synthesized source f = D u.  When harmonic_source is
/// set the analytic fields are ignored and the source is that harmonic
/// basis vector (the exact solution is then u = 0, p = e_i).
struct ManufacturedProblem {
  std::string name;
  GradedForm solution;
  GradedForm derivative;  // slot k+1 holds d of the degree-k component
  GradedForm source;
  std::optional<int> harmonic_source;
};

/// Smooth divergence- and curl-carrying 1-form on the unit square with
/// vanishing normal trace ("smooth1").
ManufacturedProblem smooth_one_form_problem();
ManufacturedProblem harmonic_source_problem(int index = 0);
ManufacturedProblem named_problem(const std::string& name);

struct ConvergenceLevel {
  double h = 0.0;
  double errW_u = 0.0;
  double errV_u = 0.0;
  double err_du = 0.0;
  double err_p = 0.0;
  double err_Bpart = 0.0;
  double err_Bstarpart = 0.0;

  std::array<double, 6> columns() const {
    return {errW_u, errV_u, err_du, err_p, err_Bpart, err_Bstarpart};
  }
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;

  /// Observed rates for consecutive level pairs, one entry per pair.
  std::vector<std::array<double, 6>> pair_rates() const;
  /// Rates of the finest level pair (the gated ones).
  std::array<double, 6> last_rates() const;
};

/// Runs solve_dirac over a sequence of meshes (resolution doubling from
/// base_resolution) and collects errors and observed rates.  Component
/// errors come from the discrete Hodge decomposition of the interpolated
/// error.
ConvergenceReport convergence_study(Domain domain, BoundaryCondition bc,
                                    const ManufacturedProblem& problem, int levels,
                                    int base_resolution = 4, double tol = 1e-9);

/// CSV with header, one row per level, and a `rates,...` trailer row
/// holding the finest-pair rates.  Floats use 17 significant digits.
std::string convergence_csv(const ConvergenceReport& report);

}  // namespace hodgedirac
