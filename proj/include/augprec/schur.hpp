#pragma once

#include <functional>
#include <memory>
#include <span>

#include "augprec/augmentation.hpp"
#include "augprec/cholesky.hpp"
#include "augprec/dense_matrix.hpp"
#include "augprec/sparse_matrix.hpp"

namespace augprec {

// Orthonormal basis Z (n x (n-m)) of ker(B).
struct NullspaceBasis {
  DenseMatrix z;
};

// Dense SVD of B; throws RankDeficientB when rank(B) < m.
NullspaceBasis nullspace_basis(const SparseMatrix& b);

enum class SchurKind { exact, diagonal, wki, bfbt, additive };

const char* to_string(SchurKind k);

// An SPD operator standing in for S_k^{-1} on vectors of length m.
class SchurOperator {
 public:
  using Apply = std::function<Vector(std::span<const double>)>;

  SchurOperator(SchurKind kind, Index m, Apply apply, double beta = 0.0)
      : kind_(kind), m_(m), beta_(beta), apply_(std::move(apply)) {}

  SchurKind kind() const { return kind_; }
  Index size() const { return m_; }
  double beta() const { return beta_; }
  Vector apply_inverse(std::span<const double> r) const;

 private:
  SchurKind kind_;
  Index m_;
  double beta_;
  Apply apply_;
};

// S_k = B A_k^{-1} B^T, materialized densely.
DenseMatrix schur_matrix(const AugmentedBlock& blk, const SparseMatrix& b);

// Solves with the materialized S_k through its dense Cholesky factor.
SchurOperator exact_schur(const AugmentedBlock& blk, const SparseMatrix& b);

// Solves with B diag(d)^{-1} B^T; d must be positive.
SchurOperator diagonal_schur(std::span<const double> d, const SparseMatrix& b);

// W_k + (BB^T)^{-1} B (A - AVA) B^T (BB^T)^{-1} with V = Z (Z^T A Z)^{-1} Z^T.
// Equals S_k^{-1} when rank(W_k) = nullity(A).
DenseMatrix schur_inverse_additive(const SparseMatrix& a, const SparseMatrix& b,
                                   const WeightSelection& sel,
                                   const NullspaceBasis& z);

// r -> (W_k + beta I) r. A multiply, not a solve.
SchurOperator wki_operator(const WeightSelection& sel, double beta, Index m);

// r -> W_k r + (BB^T)^{-1} B A B^T (BB^T)^{-1} r, with BB^T factored once.
SchurOperator bfbt_operator(const SparseMatrix& a, const SparseMatrix& b,
                            const WeightSelection& sel);

}  // namespace augprec
