#pragma once

#include <span>
#include <vector>

#include "augprec/dense_matrix.hpp"
#include "augprec/vector.hpp"

namespace augprec {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed sparse row matrix in canonical form: column indices strictly
// increasing within each row, duplicates summed, exact zeros pruned.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index nrows, Index ncols);

  // Duplicates are summed in input order, then exact zeros are pruned.
  static SparseMatrix from_triplets(Index nrows, Index ncols,
                                    std::span<const Triplet> entries);
  static SparseMatrix from_dense(const DenseMatrix& d);
  static SparseMatrix identity(Index n, double value = 1.0);
  static SparseMatrix diagonal(std::span<const double> d);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return std::span<const Index>(col_idx_).subspan(row_ptr_[i], row_nnz(i));
  }
  std::span<const double> row_values(Index i) const {
    return std::span<const double>(values_).subspan(row_ptr_[i], row_nnz(i));
  }
  std::size_t row_nnz(Index i) const {
    return static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]);
  }

  double coeff(Index i, Index j) const;
  Vector diagonal() const;
  DenseMatrix to_dense() const;
  std::vector<Triplet> triplets() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

Vector spmv(const SparseMatrix& m, std::span<const double> x);
// m^T x without materializing the transpose.
Vector spmv_transpose(const SparseMatrix& m, std::span<const double> x);
SparseMatrix transpose(const SparseMatrix& m);
// alpha*a + beta*b
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b,
                 double alpha = 1.0, double beta = 1.0);
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
// Sum over the selected rows b_i of the outer products b_i^T b_i, i.e.
// B^T W B for the 0/1 diagonal W with ones at `rows`. Bit-symmetric.
SparseMatrix triple_product(const SparseMatrix& b, std::span<const Index> rows);
// B diag(d) B^T
SparseMatrix weighted_gram(const SparseMatrix& b, std::span<const double> d);
// Principal block [i0, i1) x [i0, i1).
SparseMatrix principal_block(const SparseMatrix& m, Index i0, Index i1);
Index bandwidth(const SparseMatrix& m);
double max_abs(const SparseMatrix& m);
double symmetry_defect(const SparseMatrix& m);

}  // namespace augprec
