#include "hodgedirac/solvers.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hodgedirac {

namespace {

double scale_or_one(double s) { return s > 0.0 ? s : 1.0; }

void scatter_sparse(std::vector<Eigen::Triplet<double>>& triplets, const SparseMat& block,
                    int row_offset, int col_offset) {
  for (int k = 0; k < block.outerSize(); ++k)
    for (SparseMat::InnerIterator it(block, k); it; ++it)
      triplets.emplace_back(static_cast<int>(it.row()) + row_offset,
                            static_cast<int>(it.col()) + col_offset, it.value());
}

void scatter_dense(std::vector<Eigen::Triplet<double>>& triplets, const DenseMat& block,
                   int row_offset, int col_offset, bool transpose = false) {
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j) {
      if (block(i, j) == 0.0) continue;
      if (transpose)
        triplets.emplace_back(j + row_offset, i + col_offset, block(i, j));
      else
        triplets.emplace_back(i + row_offset, j + col_offset, block(i, j));
    }
}

Vec solve_or_fail(const SparseMat& matrix, const Vec& rhs, const char* what) {
  try {
    return solve_symmetric_indefinite(matrix, rhs).x;
  } catch (const SingularSystem& err) {
    throw SolverFailure(std::string(what) +
                        ": singular saddle system (harmonic basis tolerance failure?): " +
                        err.what());
  }
}

}  // namespace

Vec graded_load(const GradedComplex& complex, const GradedForm& f) {
  Vec load = Vec::Zero(complex.total_dim());
  const auto put = [&](const std::optional<AnalyticForm>& form, int k) {
    if (!form) return;
    if (form->degree != k) throw SolverFailure("graded_load: form degree mismatch");
    load.segment(complex.offset(k), complex.dim(k)) =
        load_vector(complex.mesh(), k, *form, complex.bc());
  };
  put(f.f0, 0);
  put(f.f1, 1);
  put(f.f2, 2);
  return load;
}

SaddleSystem assemble_dirac_system(const GradedComplex& complex, const Vec& load) {
  const int n = complex.total_dim();
  const int h = static_cast<int>(complex.harmonic_matrix().cols());
  if (load.size() != n) throw SolverFailure("assemble_dirac_system: load size mismatch");

  SparseMat md = (complex.mass() * complex.coboundary()).pruned();
  SparseMat a = md + SparseMat(md.transpose());
  DenseMat mh = complex.mass() * complex.harmonic_matrix();

  std::vector<Eigen::Triplet<double>> triplets;
  scatter_sparse(triplets, a, 0, 0);
  scatter_dense(triplets, mh, 0, n);
  scatter_dense(triplets, mh, n, 0, /*transpose=*/true);

  SaddleSystem system;
  system.matrix.resize(n + h, n + h);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.u_dim = n;
  system.p_dim = h;
  system.rhs = Vec::Zero(n + h);
  system.rhs.head(n) = load;
  return system;
}

SaddleSystem assemble_dirac_system(const GradedComplex& complex, const Cochain& f) {
  return assemble_dirac_system(complex, Vec(complex.mass() * f.values));
}

double dirac_residual(const GradedComplex& complex, const Cochain& u, const Vec& p,
                      const Vec& load) {
  const SparseMat& m = complex.mass();
  const SparseMat& d = complex.coboundary();
  const Vec r1 = m * (d * u.values) + d.transpose() * (m * u.values) +
                 m * (complex.harmonic_matrix() * p) - load;
  const Vec r2 = complex.harmonic_matrix().transpose() * (m * u.values);
  const double norm_u = std::sqrt(complex.inner(u.values, u.values));
  // The constraint residual scales with the solution, but a vanishing u
  // must not inflate roundoff noise; fall back to the load scale.
  const double constraint_scale = std::max(norm_u, scale_or_one(load.norm()));
  return std::max(r1.norm() / scale_or_one(load.norm()), r2.norm() / constraint_scale);
}

double laplace_residual(const GradedComplex& complex, const LaplaceSolution& sol) {
  const SparseMat& m = complex.mass();
  const SparseMat& d = complex.coboundary();
  const Vec r1 = m * sol.sigma.values - d.transpose() * (m * sol.u.values);
  const Vec r2 = m * (d * sol.sigma.values) + d.transpose() * (m * (d * sol.u.values)) +
                 m * (complex.harmonic_matrix() * sol.p) - sol.load;
  const Vec r3 = complex.harmonic_matrix().transpose() * (m * sol.u.values);
  const double scale = scale_or_one(sol.load.norm());
  const double norm_u = std::sqrt(complex.inner(sol.u.values, sol.u.values));
  return std::max({r1.norm() / scale, r2.norm() / scale,
                   r3.norm() / std::max(norm_u, scale)});
}

namespace {

DiracSolution solve_dirac_load(const GradedComplex& complex, const Vec& load, double tol) {
  const SaddleSystem system = assemble_dirac_system(complex, load);
  const Vec z = solve_or_fail(system.matrix, system.rhs, "solve_dirac");

  DiracSolution sol;
  sol.u = Cochain(z.head(system.u_dim));
  sol.p = z.tail(system.p_dim);
  sol.load = load;
  sol.residual = dirac_residual(complex, sol.u, sol.p, load);
  if (!(sol.residual <= tol))
    throw SolverFailure("solve_dirac: residual " + std::to_string(sol.residual) +
                        " exceeds tolerance");
  return sol;
}

LaplaceSolution solve_laplace_load(const GradedComplex& complex, const Vec& load,
                                   double tol) {
  const int n = complex.total_dim();
  const int h = static_cast<int>(complex.harmonic_matrix().cols());

  // Symmetrized three-field system: the first block row carries the sign
  // flip of the sigma equation.
  //   [ -M      D^T M    0  ] [sigma]   [  0  ]
  //   [ M D    D^T M D  M H ] [  u  ] = [load ]
  //   [  0      H^T M    0  ] [  p  ]   [  0  ]
  SparseMat md = (complex.mass() * complex.coboundary()).pruned();
  SparseMat dtmd = (complex.coboundary().transpose() * md).pruned();
  DenseMat mh = complex.mass() * complex.harmonic_matrix();

  std::vector<Eigen::Triplet<double>> triplets;
  scatter_sparse(triplets, SparseMat(-complex.mass()), 0, 0);
  scatter_sparse(triplets, SparseMat(md.transpose()), 0, n);
  scatter_sparse(triplets, md, n, 0);
  scatter_sparse(triplets, dtmd, n, n);
  scatter_dense(triplets, mh, n, 2 * n);
  scatter_dense(triplets, mh, 2 * n, n, /*transpose=*/true);

  SparseMat matrix(2 * n + h, 2 * n + h);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  Vec rhs = Vec::Zero(2 * n + h);
  rhs.segment(n, n) = load;

  const Vec z = solve_or_fail(matrix, rhs, "solve_laplace_mixed");

  LaplaceSolution sol;
  sol.sigma = Cochain(z.head(n));
  sol.u = Cochain(z.segment(n, n));
  sol.p = z.tail(h);
  sol.load = load;
  sol.residual = laplace_residual(complex, sol);
  if (!(sol.residual <= tol))
    throw SolverFailure("solve_laplace_mixed: residual " + std::to_string(sol.residual) +
                        " exceeds tolerance");
  return sol;
}

LaplaceSolution via_dirac_load(const GradedComplex& complex, const Vec& load, double tol) {
  const DiracSolution first = solve_dirac_load(complex, load, tol);
  const Vec& w = first.u.values;

  const DiracSolution second =
      solve_dirac_load(complex, Vec(complex.mass() * w), tol);
  const double norm_w = std::sqrt(complex.inner(w, w));
  if (second.p.size() > 0 && second.p.norm() > 1e-10 * scale_or_one(norm_w))
    throw SolverFailure(
        "solve_laplace_via_dirac: second solve produced a nonzero harmonic part");

  LaplaceSolution sol;
  sol.u = second.u;
  sol.sigma = Cochain(w - complex.coboundary() * second.u.values);
  sol.p = first.p;
  sol.load = load;
  sol.residual = laplace_residual(complex, sol);
  // Two solves at tol compose to a slightly weaker guarantee.
  if (!(sol.residual <= 10.0 * tol))
    throw SolverFailure("solve_laplace_via_dirac: residual " + std::to_string(sol.residual) +
                        " exceeds tolerance");
  return sol;
}

}  // namespace

DiracSolution solve_dirac(const GradedComplex& complex, const Cochain& f, double tol) {
  if (f.size() != complex.total_dim()) throw SolverFailure("solve_dirac: cochain size mismatch");
  return solve_dirac_load(complex, Vec(complex.mass() * f.values), tol);
}

DiracSolution solve_dirac(const GradedComplex& complex, const GradedForm& f, double tol) {
  return solve_dirac_load(complex, graded_load(complex, f), tol);
}

LaplaceSolution solve_laplace_mixed(const GradedComplex& complex, const Cochain& f,
                                    double tol) {
  if (f.size() != complex.total_dim())
    throw SolverFailure("solve_laplace_mixed: cochain size mismatch");
  return solve_laplace_load(complex, Vec(complex.mass() * f.values), tol);
}

LaplaceSolution solve_laplace_mixed(const GradedComplex& complex, const GradedForm& f,
                                    double tol) {
  return solve_laplace_load(complex, graded_load(complex, f), tol);
}

LaplaceSolution solve_laplace_via_dirac(const GradedComplex& complex, const Cochain& f,
                                        double tol) {
  if (f.size() != complex.total_dim())
    throw SolverFailure("solve_laplace_via_dirac: cochain size mismatch");
  return via_dirac_load(complex, Vec(complex.mass() * f.values), tol);
}

LaplaceSolution solve_laplace_via_dirac(const GradedComplex& complex, const GradedForm& f,
                                        double tol) {
  return via_dirac_load(complex, graded_load(complex, f), tol);
}

DiracSolution dirac_from_laplace(const GradedComplex& complex, const LaplaceSolution& sol) {
  DiracSolution out;
  out.u = Cochain(sol.sigma.values + complex.coboundary() * sol.u.values);
  out.p = sol.p;
  out.load = sol.load;
  out.residual = dirac_residual(complex, out.u, out.p, sol.load);
  return out;
}

Cochain harmonic_cochain(const GradedComplex& complex, const Vec& coefficients) {
  if (coefficients.size() != complex.harmonic_matrix().cols())
    throw SolverFailure("harmonic_cochain: coefficient size mismatch");
  return Cochain(complex.harmonic_matrix() * coefficients);
}

}  // namespace hodgedirac
