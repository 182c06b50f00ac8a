#pragma once

#include <Eigen/SparseCholesky>

#include <array>
#include <memory>
#include <stdexcept>

#include "hodgedirac/linalg.hpp"
#include "hodgedirac/mesh.hpp"
#include "hodgedirac/whitney.hpp"

namespace hodgedirac {

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class GradedComplex;

/// Graded coefficient vector over a complex, degrees 0,1,2 concatenated.
struct Cochain {
  Vec values;

  Cochain() = default;
  explicit Cochain(Vec v) : values(std::move(v)) {}
  Eigen::Index size() const { return values.size(); }
};

/// Per-degree M-orthonormal bases of the discrete harmonic spaces
/// ker d  intersect  ker d*.
struct HarmonicBasis {
  std::array<DenseMat, 3> blocks;  // columns in the reduced degree-k space

  std::array<int, 3> dims() const {
    return {static_cast<int>(blocks[0].cols()), static_cast<int>(blocks[1].cols()),
            static_cast<int>(blocks[2].cols())};
  }
  int total() const { return dims()[0] + dims()[1] + dims()[2]; }
};

/// Components of the discrete Hodge decomposition x = b + h + b*.
struct HodgeParts {
  Cochain b_part;      // in range(D)
  Cochain h_part;      // harmonic
  Cochain bstar_part;  // M-orthogonal to ker(D)
};

/// The discrete graded Hilbert complex: block coboundary D with D.D = 0
/// exactly, block-diagonal mass M defining the W-inner product
/// <x,y> = x^T M y, and the harmonic spaces.  Immutable after
/// construction and safe to share across threads.
class GradedComplex {
 public:
  GradedComplex(SimplicialMesh mesh, BoundaryCondition bc,
                double harmonic_tol = kRankTolerance);

  const SimplicialMesh& mesh() const { return mesh_; }
  BoundaryCondition bc() const { return bc_; }
  double harmonic_tol() const { return harmonic_tol_; }

  const std::array<int, 3>& dims() const { return dims_; }
  int dim(int k) const { return dims_[static_cast<size_t>(k)]; }
  int total_dim() const { return dims_[0] + dims_[1] + dims_[2]; }
  int offset(int k) const;

  /// Block coboundary over the whole graded space (degree k to k+1).
  const SparseMat& coboundary() const { return full_d_; }
  /// Degree-k block, shape dim(k+1) x dim(k); k in {0, 1}.
  const SparseMat& coboundary_block(int k) const { return cob_[static_cast<size_t>(k)]; }

  const SparseMat& mass() const { return full_m_; }
  const SparseMat& mass_block(int k) const { return mass_[static_cast<size_t>(k)]; }
  Vec apply_mass_inverse(const Vec& x) const;

  const HarmonicBasis& harmonics() const { return harmonics_; }
  /// Harmonic basis embedded as columns of an (total_dim x h) matrix.
  const DenseMat& harmonic_matrix() const { return harmonic_matrix_; }

  Vec component(const Vec& graded, int k) const;
  Vec assemble_graded(const Vec& v0, const Vec& v1, const Vec& v2) const;
  /// Expands the reduced degree-k coefficients of a graded vector to the
  /// full mesh DOF numbering (zeros on eliminated boundary DOFs).
  Vec full_component(const Vec& graded, int k) const;

  /// W-inner product x^T M y.
  double inner(const Vec& x, const Vec& y) const;

 private:
  SimplicialMesh mesh_;
  BoundaryCondition bc_;
  double harmonic_tol_;
  std::array<int, 3> dims_{};
  std::array<SparseMat, 3> mass_;
  std::array<SparseMat, 2> cob_;
  std::array<SparseMat, 2> proj_normal_;  // D_{k-1}^T M_k D_{k-1} for k = 1, 2
  std::array<SparseMat, 2> proj_rhs_;     // D_{k-1}^T M_k
  std::array<double, 2> proj_scale_{};    // infinity-norm bound of proj_rhs_
  SparseMat full_d_, full_m_;
  std::shared_ptr<const Eigen::SimplicialLDLT<SparseMat>> mass_solver_;
  HarmonicBasis harmonics_;
  DenseMat harmonic_matrix_;

  friend HodgeParts hodge_decompose(const GradedComplex&, const Cochain&);
};

GradedComplex build_complex(const SimplicialMesh& mesh, BoundaryCondition bc);

/// Recomputes the harmonic basis at a given rank tolerance.  For built-in
/// domains the per-degree dimensions are checked against the known Betti
/// numbers and a mismatch is a hard failure.
HarmonicBasis harmonic_basis(const GradedComplex& complex,
                             double tol_rel = kRankTolerance);

/// Expected harmonic dimensions for the built-in domains (Betti numbers
/// under natural conditions, their Poincare-Lefschetz duals under
/// essential ones).
std::array<int, 3> expected_harmonic_dims(Domain domain, BoundaryCondition bc);

/// Splits x into exact, harmonic and co-exact parts; parts sum to x and
/// are pairwise M-orthogonal.
HodgeParts hodge_decompose(const GradedComplex& complex, const Cochain& x);

/// Applies the discrete Hodge--Dirac operator D u + M^{-1} D^T M u.
Cochain apply_dirac(const GradedComplex& complex, const Cochain& u);

}  // namespace hodgedirac
