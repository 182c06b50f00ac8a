#pragma once

#include <optional>

#include "hodgedirac/complex.hpp"

namespace hodgedirac {

/// Graded analytic source: any subset of the three degrees may be present;
/// missing components are zero.
struct GradedForm {
  std::optional<AnalyticForm> f0;
  std::optional<AnalyticForm> f1;
  std::optional<AnalyticForm> f2;

  const std::optional<AnalyticForm>& component(int k) const {
    switch (k) {
      case 0: return f0;
      case 1: return f1;
      default: return f2;
    }
  }
};

/// Solution of the discrete Hodge--Dirac mixed problem.  `p` holds the
/// coefficients in the M-orthonormal harmonic basis; `load` is the weak
/// right-hand side <f, phi_i> the solve was run against.
struct DiracSolution {
  Cochain u;
  Vec p;
  double residual = 0.0;
  Vec load;
};

/// Solution of the discrete Hodge--Laplace mixed problem.
struct LaplaceSolution {
  Cochain sigma;
  Cochain u;
  Vec p;
  double residual = 0.0;
  Vec load;
};

/// Assembled symmetric saddle system
///   [ MD + D^T M   M H ] [u]   [load]
///   [ H^T M         0  ] [p] = [  0 ]
struct SaddleSystem {
  SparseMat matrix;
  Vec rhs;
  int u_dim = 0;
  int p_dim = 0;
};

/// Weak right-hand side of a graded analytic source, all degrees stacked.
Vec graded_load(const GradedComplex& complex, const GradedForm& f);

SaddleSystem assemble_dirac_system(const GradedComplex& complex, const Vec& load);
SaddleSystem assemble_dirac_system(const GradedComplex& complex, const Cochain& f);

/// Residuals of candidate solutions in the weak equations, relative to the
/// load (harmonic-constraint residual is scaled by the solution norm).
double dirac_residual(const GradedComplex& complex, const Cochain& u, const Vec& p,
                      const Vec& load);
double laplace_residual(const GradedComplex& complex, const LaplaceSolution& sol);

DiracSolution solve_dirac(const GradedComplex& complex, const Cochain& f,
                          double tol = 1e-9);
DiracSolution solve_dirac(const GradedComplex& complex, const GradedForm& f,
                          double tol = 1e-9);

LaplaceSolution solve_laplace_mixed(const GradedComplex& complex, const Cochain& f,
                                    double tol = 1e-9);
LaplaceSolution solve_laplace_mixed(const GradedComplex& complex, const GradedForm& f,
                                    double tol = 1e-9);

/// Two sequential Dirac solves: (w, p) for f, then (u, 0) for w; returns
/// (w - Du, u, p).  The second solve keeps the harmonic constraint and the
/// computed harmonic part is checked to vanish.
LaplaceSolution solve_laplace_via_dirac(const GradedComplex& complex, const Cochain& f,
                                        double tol = 1e-9);
LaplaceSolution solve_laplace_via_dirac(const GradedComplex& complex, const GradedForm& f,
                                        double tol = 1e-9);

/// Converse construction: (sigma + Du, p) solves the Dirac problem for the
/// same source.
DiracSolution dirac_from_laplace(const GradedComplex& complex, const LaplaceSolution& sol);

/// Cochain with the given harmonic-basis coefficients.
Cochain harmonic_cochain(const GradedComplex& complex, const Vec& coefficients);

}  // namespace hodgedirac
