#include "hodgedirac/linalg.hpp"

#include <lapacke.h>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace hodgedirac {

namespace {

double rhs_scale(const Vec& b) {
  const double n = b.norm();
  return n > 0.0 ? n : 1.0;
}

// Right singular vectors only; the left ones are never needed for kernel
// extraction.  A is overwritten.
struct DenseSvd {
  Vec singular_values;
  DenseMat vt;  // full right singular vectors, rows of V^T
};

DenseSvd full_svd(DenseMat A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  DenseSvd out;
  out.singular_values = Vec::Zero(std::min(m, n));
  out.vt = DenseMat::Zero(n, n);
  Vec superb(std::max<lapack_int>(1, std::min(m, n) - 1));
  const lapack_int info = LAPACKE_dgesvd(
      LAPACK_COL_MAJOR, 'N', 'A', m, n, A.data(), std::max<lapack_int>(1, m),
      out.singular_values.data(), nullptr, 1, out.vt.data(),
      std::max<lapack_int>(1, n), superb.data());
  if (info != 0) throw SingularSystem("SVD failed to converge");
  return out;
}

}  // namespace

DirectSolver::DirectSolver(const SparseMat& matrix) : matrix_(matrix) {
  if (matrix_.rows() != matrix_.cols())
    throw SingularSystem("DirectSolver: matrix must be square");
  matrix_.makeCompressed();
  lu_.compute(matrix_);
  if (lu_.info() != Eigen::Success)
    throw SingularSystem("DirectSolver: factorization failed (rank deficient?)");
}

Vec DirectSolver::solve(const Vec& rhs) const {
  Vec x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success)
    throw SingularSystem("DirectSolver: solve failed");
  return x;
}

double DirectSolver::residual(const Vec& x, const Vec& rhs) const {
  return (matrix_ * x - rhs).norm() / rhs_scale(rhs);
}

SolveResult solve_symmetric_indefinite(const SparseMat& A, const Vec& b) {
  if (A.rows() != b.size())
    throw SingularSystem("solve_symmetric_indefinite: rhs size mismatch");
  DirectSolver solver(A);
  SolveResult result;
  result.x = solver.solve(b);
  result.residual = solver.residual(result.x, b);
  return result;
}

DenseMat nullspace(const DenseMat& A, double tol_rel) {
  const Eigen::Index n = A.cols();
  if (n == 0) return DenseMat(0, 0);
  if (A.rows() == 0) return DenseMat::Identity(n, n);

  DenseSvd svd = full_svd(A);
  const double smax = svd.singular_values.size() > 0 ? svd.singular_values[0] : 0.0;
  const double thresh = tol_rel * smax;

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i)
    if (svd.singular_values[i] > thresh) ++rank;

  const Eigen::Index nullity = n - rank;
  DenseMat basis(n, nullity);
  for (Eigen::Index j = 0; j < nullity; ++j)
    basis.col(j) = svd.vt.row(rank + j).transpose();
  return basis;
}

DenseMat sparse_kernel(const SparseMat& A, double tol_rel, int expected_dim) {
  const Eigen::Index n = A.cols();
  if (n == 0) return DenseMat(0, 0);
  if (A.rows() == 0 || A.nonZeros() == 0) return DenseMat::Identity(n, n);

  SparseMat At = A.transpose();
  SparseMat normal = (At * A).pruned();
  normal.makeCompressed();

  // Gershgorin upper bound on the largest eigenvalue of A^T A = sigma_max^2.
  double gersh = 0.0;
  for (int k = 0; k < normal.outerSize(); ++k) {
    double row = 0.0;
    for (SparseMat::InnerIterator it(normal, k); it; ++it) row += std::abs(it.value());
    gersh = std::max(gersh, row);
  }
  if (gersh == 0.0) return DenseMat::Identity(n, n);
  // Squaring pushes kernel eigenvalues to the roundoff floor of the normal
  // matrix (~1e-16 * lambda_max), so the Ritz threshold cannot sit below
  // that; candidates are re-verified against A itself at tol_rel.
  const double lambda_thresh = std::max(tol_rel * tol_rel, 1e-13) * gersh;

  const double shift = 1e-12 * gersh;
  SparseMat shifted = normal;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += shift;
  Eigen::SimplicialLDLT<SparseMat> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw SingularSystem("sparse_kernel: shifted factorization failed");

  std::mt19937 rng(0x5eedu);
  std::normal_distribution<double> gauss(0.0, 1.0);

  int block = std::max(expected_dim + 3, 4);
  for (int attempt = 0; attempt < 8; ++attempt) {
    block = std::min<int>(block, static_cast<int>(n));
    DenseMat X(n, block);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int j = 0; j < block; ++j) X(i, j) = gauss(rng);

    // The inverse-iteration operator separates the kernel from the rest by
    // a factor ~lambda_1/shift, so a handful of sweeps suffices.
    for (int sweep = 0; sweep < 4; ++sweep) {
      X = ldlt.solve(X);
      Eigen::HouseholderQR<DenseMat> qr(X);
      X = qr.householderQ() * DenseMat::Identity(n, block);
    }

    DenseMat small = X.transpose() * (normal * X);
    Eigen::SelfAdjointEigenSolver<DenseMat> eig(0.5 * (small + small.transpose()));
    const Vec& theta = eig.eigenvalues();  // ascending

    Eigen::Index nullity = 0;
    while (nullity < theta.size() && theta[nullity] <= lambda_thresh) ++nullity;
    if (nullity == theta.size() && block < n) {
      block *= 2;  // kernel larger than the block; widen and retry
      continue;
    }

    DenseMat kernel = X * eig.eigenvectors().leftCols(nullity);
    // Hard check against A itself, not just the normal matrix.
    const double sigma_max = std::sqrt(gersh);
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
      const double r = (A * kernel.col(j)).norm();
      if (r > tol_rel * sigma_max * kernel.col(j).norm())
        throw SingularSystem("sparse_kernel: candidate kernel vector failed verification");
    }
    return kernel;
  }
  throw SingularSystem("sparse_kernel: block iteration did not isolate the kernel");
}

GeneralizedEig generalized_symmetric_eig(const DenseMat& A, const DenseMat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw SingularSystem("generalized_symmetric_eig: dimension mismatch");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  GeneralizedEig out;
  out.values = Vec::Zero(n);
  out.vectors = A;  // overwritten with eigenvectors
  DenseMat b = B;
  const lapack_int info =
      LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'V', 'L', n, out.vectors.data(),
                     std::max<lapack_int>(1, n), b.data(),
                     std::max<lapack_int>(1, n), out.values.data());
  if (info > n) throw NotPositiveDefinite("generalized_symmetric_eig: B is not positive definite");
  if (info != 0) throw SingularSystem("generalized_symmetric_eig: eigensolver failed");
  return out;
}

GeneralizedEig generalized_symmetric_eig(const SparseMat& A, const SparseMat& B) {
  return generalized_symmetric_eig(DenseMat(A), DenseMat(B));
}

double smallest_eig_magnitude(const SparseMat& G, const SparseMat& N,
                              int max_steps, double tol) {
  const Eigen::Index n = G.rows();
  if (n == 0 || G.cols() != n || N.rows() != n || N.cols() != n)
    throw SingularSystem("smallest_eig_magnitude: dimension mismatch");

  DirectSolver solver(G);

  const auto n_dot = [&](const Vec& a, const Vec& b) { return a.dot(N * b); };

  std::mt19937 rng(0x1a2cu);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec q = Vec::NullaryExpr(n, [&](Eigen::Index) { return gauss(rng); });
  q /= std::sqrt(n_dot(q, q));

  std::vector<Vec> basis{q};
  std::vector<double> alpha, beta;
  const int m = std::min<int>(max_steps, static_cast<int>(n));
  double extreme = 0.0;

  auto tridiag_extreme = [&]() {
    const int k = static_cast<int>(alpha.size());
    DenseMat t = DenseMat::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<DenseMat> eig(t);
    return std::max(std::abs(eig.eigenvalues()[0]), std::abs(eig.eigenvalues()[k - 1]));
  };

  for (int j = 0; j < m; ++j) {
    Vec w = solver.solve(N * basis[j]);
    const double a = n_dot(w, basis[j]);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (int pass = 0; pass < 2; ++pass)  // full reorthogonalization
      for (const Vec& v : basis) w -= n_dot(w, v) * v;
    const double b = std::sqrt(std::max(0.0, n_dot(w, w)));
    if ((j + 1) % 10 == 0 || b < 1e-14 || j + 1 == m) {
      const double cur = tridiag_extreme();
      if (b < 1e-14) return 1.0 / cur;  // exact invariant subspace
      if (extreme > 0.0 && std::abs(cur - extreme) <= tol * std::abs(cur) && j > 20)
        return 1.0 / cur;
      extreme = cur;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  if (extreme > 0.0) return 1.0 / extreme;
  throw SingularSystem("smallest_eig_magnitude: Lanczos failed to converge");
}

}  // namespace hodgedirac
