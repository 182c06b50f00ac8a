#include "hodgedirac/complex.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace hodgedirac {

namespace {

// Restriction of a full coboundary block to the kept rows/columns.
SparseMat restrict_matrix(const SparseMat& full, const std::vector<int>& kept_rows,
                          const std::vector<int>& kept_cols) {
  std::vector<int> row_map(static_cast<size_t>(full.rows()), -1);
  std::vector<int> col_map(static_cast<size_t>(full.cols()), -1);
  for (size_t r = 0; r < kept_rows.size(); ++r) row_map[static_cast<size_t>(kept_rows[r])] = static_cast<int>(r);
  for (size_t c = 0; c < kept_cols.size(); ++c) col_map[static_cast<size_t>(kept_cols[c])] = static_cast<int>(c);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < full.outerSize(); ++k)
    for (SparseMat::InnerIterator it(full, k); it; ++it) {
      const int r = row_map[static_cast<size_t>(it.row())];
      const int c = col_map[static_cast<size_t>(it.col())];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  SparseMat out(static_cast<int>(kept_rows.size()), static_cast<int>(kept_cols.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

void scatter_block(std::vector<Eigen::Triplet<double>>& triplets, const SparseMat& block,
                   int row_offset, int col_offset) {
  for (int k = 0; k < block.outerSize(); ++k)
    for (SparseMat::InnerIterator it(block, k); it; ++it)
      triplets.emplace_back(static_cast<int>(it.row()) + row_offset,
                            static_cast<int>(it.col()) + col_offset, it.value());
}

constexpr int kDenseKernelLimit = 400;

}  // namespace

std::array<int, 3> expected_harmonic_dims(Domain domain, BoundaryCondition bc) {
  const bool natural = bc == BoundaryCondition::Natural;
  switch (domain) {
    case Domain::Square:
    case Domain::Disk:
      return natural ? std::array<int, 3>{1, 0, 0} : std::array<int, 3>{0, 0, 1};
    case Domain::Annulus:
      return natural ? std::array<int, 3>{1, 1, 0} : std::array<int, 3>{0, 1, 1};
    default:
      throw MeshError("expected_harmonic_dims: unknown for external domains");
  }
}

GradedComplex::GradedComplex(SimplicialMesh mesh, BoundaryCondition bc,
                             double harmonic_tol)
    : mesh_(std::move(mesh)), bc_(bc), harmonic_tol_(harmonic_tol) {
  validate_mesh(mesh_);

  std::array<std::vector<int>, 3> kept;
  for (int k = 0; k < 3; ++k) {
    kept[static_cast<size_t>(k)] = interior_dofs(mesh_, k, bc_);
    dims_[static_cast<size_t>(k)] = static_cast<int>(kept[static_cast<size_t>(k)].size());
    mass_[static_cast<size_t>(k)] = assemble_mass(mesh_, k, bc_);
  }
  cob_[0] = restrict_matrix(hodgedirac::coboundary(mesh_, 0), kept[1], kept[0]);
  cob_[1] = restrict_matrix(hodgedirac::coboundary(mesh_, 1), kept[2], kept[1]);

  const int n = total_dim();
  std::vector<Eigen::Triplet<double>> dtrip, mtrip;
  scatter_block(dtrip, cob_[0], offset(1), offset(0));
  scatter_block(dtrip, cob_[1], offset(2), offset(1));
  full_d_.resize(n, n);
  full_d_.setFromTriplets(dtrip.begin(), dtrip.end());
  for (int k = 0; k < 3; ++k) scatter_block(mtrip, mass_[static_cast<size_t>(k)], offset(k), offset(k));
  full_m_.resize(n, n);
  full_m_.setFromTriplets(mtrip.begin(), mtrip.end());

  auto solver = std::make_shared<Eigen::SimplicialLDLT<SparseMat>>();
  solver->compute(full_m_);
  if (solver->info() != Eigen::Success)
    throw SolverFailure("GradedComplex: mass matrix factorization failed");
  mass_solver_ = std::move(solver);

  // Normal operators for the M-orthogonal projection onto range(D),
  // degreewise: k = 1 uses D_0, k = 2 uses D_1.
  for (int k = 1; k <= 2; ++k) {
    const SparseMat& d = cob_[static_cast<size_t>(k - 1)];
    SparseMat dt = d.transpose();
    proj_rhs_[static_cast<size_t>(k - 1)] = (dt * mass_[static_cast<size_t>(k)]).pruned();
    proj_normal_[static_cast<size_t>(k - 1)] =
        (proj_rhs_[static_cast<size_t>(k - 1)] * d).pruned();
    Vec row_sums = Vec::Zero(proj_rhs_[static_cast<size_t>(k - 1)].rows());
    const SparseMat& pr = proj_rhs_[static_cast<size_t>(k - 1)];
    for (int col = 0; col < pr.outerSize(); ++col)
      for (SparseMat::InnerIterator it(pr, col); it; ++it)
        row_sums[it.row()] += std::abs(it.value());
    proj_scale_[static_cast<size_t>(k - 1)] =
        row_sums.size() > 0 ? row_sums.maxCoeff() : 0.0;
  }

  harmonics_ = harmonic_basis(*this, harmonic_tol_);
  harmonic_matrix_ = DenseMat::Zero(n, harmonics_.total());
  int col = 0;
  for (int k = 0; k < 3; ++k) {
    const DenseMat& block = harmonics_.blocks[static_cast<size_t>(k)];
    harmonic_matrix_.block(offset(k), col, dim(k), block.cols()) = block;
    col += static_cast<int>(block.cols());
  }
}

int GradedComplex::offset(int k) const {
  int off = 0;
  for (int i = 0; i < k; ++i) off += dims_[static_cast<size_t>(i)];
  return off;
}

Vec GradedComplex::apply_mass_inverse(const Vec& x) const {
  Vec y = mass_solver_->solve(x);
  if (mass_solver_->info() != Eigen::Success)
    throw SolverFailure("GradedComplex: mass solve failed");
  return y;
}

Vec GradedComplex::component(const Vec& graded, int k) const {
  return graded.segment(offset(k), dim(k));
}

Vec GradedComplex::assemble_graded(const Vec& v0, const Vec& v1, const Vec& v2) const {
  Vec out(total_dim());
  out.segment(offset(0), dim(0)) = v0;
  out.segment(offset(1), dim(1)) = v1;
  out.segment(offset(2), dim(2)) = v2;
  return out;
}

Vec GradedComplex::full_component(const Vec& graded, int k) const {
  return expand_dofs(mesh_, k, bc_, component(graded, k));
}

double GradedComplex::inner(const Vec& x, const Vec& y) const {
  return x.dot(full_m_ * y);
}

GradedComplex build_complex(const SimplicialMesh& mesh, BoundaryCondition bc) {
  return GradedComplex(mesh, bc);
}

HarmonicBasis harmonic_basis(const GradedComplex& complex, double tol_rel) {
  HarmonicBasis basis;
  for (int k = 0; k < 3; ++k) {
    const int n = complex.dim(k);
    if (n == 0) {
      basis.blocks[static_cast<size_t>(k)] = DenseMat(0, 0);
      continue;
    }

    // Stacked operator [D_k ; D_{k-1}^T M_k]; its kernel is the harmonic
    // space at degree k.
    std::vector<Eigen::Triplet<double>> triplets;
    int rows = 0;
    if (k < 2) {
      scatter_block(triplets, complex.coboundary_block(k), 0, 0);
      rows += complex.dim(k + 1);
    }
    if (k > 0) {
      SparseMat dtm = complex.coboundary_block(k - 1).transpose() * complex.mass_block(k);
      scatter_block(triplets, dtm, rows, 0);
      rows += complex.dim(k - 1);
    }
    SparseMat stacked(rows, n);
    stacked.setFromTriplets(triplets.begin(), triplets.end());

    int hint = 4;
    if (complex.mesh().domain_tag != Domain::External)
      hint = expected_harmonic_dims(complex.mesh().domain_tag, complex.bc())[static_cast<size_t>(k)];

    DenseMat kernel = n <= kDenseKernelLimit ? nullspace(DenseMat(stacked), tol_rel)
                                             : sparse_kernel(stacked, tol_rel, hint);

    // M-orthonormalize.
    if (kernel.cols() > 0) {
      DenseMat gram = kernel.transpose() * complex.mass_block(k) * kernel;
      Eigen::LLT<DenseMat> llt(gram);
      if (llt.info() != Eigen::Success)
        throw SolverFailure("harmonic_basis: Gram matrix not positive definite");
      kernel = llt.matrixL().solve(kernel.transpose()).transpose();
    }
    basis.blocks[static_cast<size_t>(k)] = std::move(kernel);
  }

  if (complex.mesh().domain_tag != Domain::External) {
    const auto expected = expected_harmonic_dims(complex.mesh().domain_tag, complex.bc());
    if (basis.dims() != expected)
      throw SolverFailure(
          "harmonic_basis: computed dimensions (" + std::to_string(basis.dims()[0]) + "," +
          std::to_string(basis.dims()[1]) + "," + std::to_string(basis.dims()[2]) +
          ") do not match the domain Betti numbers");
  }
  return basis;
}

HodgeParts hodge_decompose(const GradedComplex& complex, const Cochain& x) {
  if (x.size() != complex.total_dim())
    throw SolverFailure("hodge_decompose: cochain length mismatch");

  const DenseMat& h = complex.harmonic_matrix();
  Vec h_part = Vec::Zero(complex.total_dim());
  if (h.cols() > 0) h_part = h * (h.transpose() * (complex.mass() * x.values));

  const Vec remainder = x.values - h_part;

  // Degreewise M-orthogonal projection onto range(D): solve the normal
  // equations D^T M D y = D^T M r.  The normal matrix is singular on
  // ker(D) but the system is consistent; conjugate gradients started from
  // zero stay in range(D^T M D), so the projection D y is unaffected by
  // the kernel.
  Vec b_part = Vec::Zero(complex.total_dim());
  for (int k = 1; k <= 2; ++k) {
    const SparseMat& d = complex.coboundary_block(k - 1);
    if (d.cols() == 0 || d.rows() == 0) continue;
    const Vec rk = complex.component(remainder, k);
    const Vec rhs = complex.proj_rhs_[static_cast<size_t>(k - 1)] * rk;
    // A right-hand side at the roundoff floor means r_k is already
    // M-orthogonal to range(D); iterating on noise gains nothing.
    if (rhs.norm() <= 1e-13 * complex.proj_scale_[static_cast<size_t>(k - 1)] * rk.norm())
      continue;
    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper,
                             Eigen::IdentityPreconditioner>
        cg;
    cg.setTolerance(1e-13);
    cg.setMaxIterations(20 * d.cols());
    cg.compute(complex.proj_normal_[static_cast<size_t>(k - 1)]);
    const Vec y = cg.solve(rhs);
    b_part.segment(complex.offset(k), complex.dim(k)) = d * y;
  }

  HodgeParts parts;
  parts.b_part = Cochain(b_part);
  parts.h_part = Cochain(h_part);
  parts.bstar_part = Cochain(remainder - b_part);

  // The contracts, not the iteration count, decide success: orthogonality
  // relative to the input magnitude, matching the unit-input tolerance.
  const double nx2 = complex.inner(x.values, x.values);
  const double cross = std::abs(complex.inner(parts.b_part.values, parts.bstar_part.values));
  if (cross > 1e-10 * std::max(nx2, 1e-300))
    throw SolverFailure("hodge_decompose: projection failed the orthogonality contract");
  return parts;
}

Cochain apply_dirac(const GradedComplex& complex, const Cochain& u) {
  if (u.size() != complex.total_dim())
    throw SolverFailure("apply_dirac: cochain length mismatch");
  const Vec down = complex.apply_mass_inverse(complex.coboundary().transpose() *
                                              (complex.mass() * u.values));
  return Cochain(complex.coboundary() * u.values + down);
}

}  // namespace hodgedirac
