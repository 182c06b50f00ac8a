#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace hodgedirac {

using SparseMat = Eigen::SparseMatrix<double>;
using DenseMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Relative threshold below which singular values count as numerically zero.
/// Well separated from both assembly quadrature error (~1e-14) and the
/// discretization scales encountered at desk-size meshes.
inline constexpr double kRankTolerance = 1e-9;

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reusable direct factorization of a sparse square matrix.  Intended for
/// symmetric (possibly indefinite) systems; repeated solves share the
/// factorization.  Throws SingularSystem when the factorization detects
/// rank deficiency.
class DirectSolver {
 public:
  explicit DirectSolver(const SparseMat& matrix);

  Vec solve(const Vec& rhs) const;
  Eigen::Index dim() const { return matrix_.rows(); }
  /// Relative residual of a candidate solution, normalized by the rhs norm
  /// (absolute when the rhs vanishes).
  double residual(const Vec& x, const Vec& rhs) const;

 private:
  SparseMat matrix_;
  Eigen::SparseLU<SparseMat> lu_;
};

struct SolveResult {
  Vec x;
  double residual = 0.0;  // recomputed relative residual
};

/// Solves A x = b for sparse symmetric nonsingular A by direct
/// factorization and recomputes the residual.
SolveResult solve_symmetric_indefinite(const SparseMat& A, const Vec& b);

/// Orthonormal basis (as columns) of { x : ||A x|| <= tol_rel * s_max * ||x|| },
/// computed by dense singular-value thresholding.  Empty matrix when A has
/// full column rank.
DenseMat nullspace(const DenseMat& A, double tol_rel = kRankTolerance);

/// Kernel of a sparse matrix with a small expected nullity, via shifted
/// inverse subspace iteration on the normal matrix A^T A.  Matches the
/// thresholding semantics of nullspace(); `expected_dim` is a starting
/// block-size hint only, the result is determined by the tolerance.
DenseMat sparse_kernel(const SparseMat& A, double tol_rel = kRankTolerance,
                       int expected_dim = 4);

struct GeneralizedEig {
  Vec values;        // ascending
  DenseMat vectors;  // columns, B-orthonormal
};

/// All solutions of A x = lambda B x for symmetric A and symmetric
/// positive-definite B (dense reduction).  Throws NotPositiveDefinite when
/// B fails the Cholesky step.
GeneralizedEig generalized_symmetric_eig(const SparseMat& A, const SparseMat& B);
GeneralizedEig generalized_symmetric_eig(const DenseMat& A, const DenseMat& B);

/// Smallest |lambda| of the pencil (G, N) with G symmetric nonsingular and
/// N symmetric positive definite, via Lanczos iteration on G^{-1} N in the
/// N-inner product.  Suited to sparse saddle matrices too large for the
/// dense reduction.
double smallest_eig_magnitude(const SparseMat& G, const SparseMat& N,
                              int max_steps = 400, double tol = 1e-12);

}  // namespace hodgedirac
