#pragma once

#include <vector>

#include "qestkit/operators.hpp"

namespace qestkit {

enum class Ring { real, complex, quaternion };

// One irreducible block: n x n matrices over the ring, repeated with
// multiplicity m. Inside the adapted basis the block occupies its rows as m
// consecutive n x n diagonal copies (2n x 2n per entry for quaternion, where
// the quaternion w + xi + yj + zk is stored as the 2x2 complex matrix
// w I + i(x X + y Y + z Z) on Pauli X, Y, Z).
struct BlockSpec {
  Ring ring = Ring::real;
  int n = 1;
  int m = 1;

  int rows() const { return ring == Ring::quaternion ? 2 * n * m : n * m; }
};

// A real *-subalgebra of B(C^D) in block form: a unitary change of basis U
// followed by a direct sum of matrix blocks. An operator lies in the algebra
// iff U^+ A U is block diagonal with each block of the form I_m (x) A_b, A_b
// over the block's ring.
class SubalgebraSpec {
public:
  // basis_change empty means identity. Throws ValidationError /
  // DimensionMismatch on empty blocks, nonpositive (n, m), or a non-unitary
  // basis change.
  explicit SubalgebraSpec(std::vector<BlockSpec> blocks,
                          CMatrix basis_change = CMatrix());

  int ambient_dim() const { return ambient_dim_; }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  const CMatrix& basis_change() const { return basis_change_; }
  bool identity_basis() const { return identity_basis_; }

  // Row offset of block b inside the adapted basis.
  int block_offset(int b) const { return offsets_[b]; }

private:
  std::vector<BlockSpec> blocks_;
  CMatrix basis_change_;
  std::vector<int> offsets_;
  int ambient_dim_ = 0;
  bool identity_basis_ = true;
};

// Real dimension of the Hermitian part of the algebra:
// n(n+1)/2 per real block, n^2 per complex block, 2n^2 - n per quaternion
// block, independent of multiplicities.
int dim_h(const SubalgebraSpec& spec);

// Positive unital projection onto the algebra: rotate into the adapted basis,
// pinch to the block diagonal, average the m copies of each block (entrywise
// real part on real blocks), tile the average back, rotate back. Orthogonal
// projection for the real Hilbert-Schmidt inner product, so
// Re tr(S project(spec, B)) = Re tr(project(spec, S) B) for Hermitian S.
// Quaternion blocks are not supported here (UnsupportedRing).
CMatrix project(const SubalgebraSpec& spec, const CMatrix& b);

// Max entry of |B - project(spec, B)|; zero iff B is in the algebra (up to
// the real-part convention on real blocks).
double membership_deviation(const SubalgebraSpec& spec, const CMatrix& b);

// A positive multiple of a minimal projection of the algebra; op / scale is
// the projection itself.
struct ExtremeElement {
  CMatrix op;
  int block_index = 0;
  double scale = 0.0;
};

// Writes a PSD element of the algebra as a sum of positive multiples of
// minimal projections (per-block spectral pieces). Errors: NotPsd,
// NotInSubalgebra (membership deviation above 1e-10), UnsupportedRing.
std::vector<ExtremeElement> extreme_decompose(const SubalgebraSpec& spec,
                                              const CMatrix& x);

// Basis of the Hermitian part, dim_h(spec) ambient-dimension matrices with an
// invertible Gram matrix. Used for coordinates in the reduction nullspace
// step. UnsupportedRing on quaternion blocks.
std::vector<CMatrix> hermitian_basis(const SubalgebraSpec& spec);

// Max over sigma in {rho, drho...} of membership_deviation(spec, sigma).
// Because project is the orthogonal projection, this is exactly the worst
// residual of the identities Re tr(sigma project(B)) = Re tr(sigma B) over
// unit-entry test operators B.
double sufficiency_residual(const SubalgebraSpec& spec, const CMatrix& rho,
                            const std::vector<CMatrix>& drho);

}  // namespace qestkit
