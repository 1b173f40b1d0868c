#pragma once

#include <span>
#include <variant>

#include "augprec/dense_matrix.hpp"
#include "augprec/sparse_matrix.hpp"

namespace augprec {

enum class FactorKind { dense, incomplete };

// Lower-triangular Cholesky factor L with L L^T = M (exactly for dense,
// approximately for incomplete). Diagonal of L is strictly positive.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(DenseMatrix lower);
  explicit CholeskyFactor(SparseMatrix lower);

  FactorKind kind() const {
    return std::holds_alternative<DenseMatrix>(lower_) ? FactorKind::dense
                                                       : FactorKind::incomplete;
  }
  Index size() const;
  // Stored entries of L (lower triangle including the diagonal).
  std::size_t nnz() const;

  const DenseMatrix& dense_lower() const { return std::get<DenseMatrix>(lower_); }
  const SparseMatrix& sparse_lower() const { return std::get<SparseMatrix>(lower_); }

  // L y = b
  Vector forward(std::span<const double> b) const;
  // L^T x = y
  Vector backward(std::span<const double> y) const;
  // (L L^T)^{-1} b
  Vector solve(std::span<const double> b) const;
  DenseMatrix to_dense() const;

 private:
  std::variant<DenseMatrix, SparseMatrix> lower_;
};

// Throws NotPositiveDefinite on the first nonpositive pivot. Only the lower
// triangle of m is read.
CholeskyFactor dense_cholesky(const DenseMatrix& m);

inline Vector solve_with(const CholeskyFactor& f, std::span<const double> rhs) {
  return f.solve(rhs);
}

// Left-looking threshold incomplete Cholesky (ICT). When column j of L is
// formed, an off-diagonal entry l_ij is dropped if
//   |l_ij| < droptol * ||M(j:n, j)||_2,
// the norm taken over the lower part of column j of the input. droptol = 0
// gives the exact sparse Cholesky factor (fill included). `shift` is added to
// every diagonal entry before factoring. Throws BreakdownPivot when a pivot is
// nonpositive.
CholeskyFactor incomplete_cholesky(const SparseMatrix& m, double droptol,
                                   double shift = 0.0);

// ||M||_1 * ||M^{-1}||_1 for SPD M given its Cholesky factor.
double condition_1norm(const DenseMatrix& m, const CholeskyFactor& f);

}  // namespace augprec
