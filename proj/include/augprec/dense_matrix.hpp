#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "augprec/vector.hpp"

namespace augprec {

// Row-major dense matrix for desk-scale factorizations and eigensolves.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index nrows, Index ncols, double fill = 0.0);
  DenseMatrix(Index nrows, Index ncols, std::vector<double> values);

  static DenseMatrix identity(Index n);
  static DenseMatrix diagonal(std::span<const double> d);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }

  double& operator()(Index i, Index j) { return values_[idx(i, j)]; }
  double operator()(Index i, Index j) const { return values_[idx(i, j)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> row(Index i) const {
    return {values_.data() + idx(i, 0), static_cast<std::size_t>(ncols_)};
  }

  Vector column(Index j) const;
  void set_column(Index j, std::span<const double> v);

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t idx(Index i, Index j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) +
           static_cast<std::size_t>(j);
  }

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<double> values_;
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
Vector multiply(const DenseMatrix& a, std::span<const double> x);
// alpha*a + beta*b
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b, double alpha = 1.0,
                double beta = 1.0);
DenseMatrix symmetrize(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double norm_1(const DenseMatrix& a);
// Rows [r0, r1) and columns [c0, c1).
DenseMatrix block(const DenseMatrix& a, Index r0, Index r1, Index c0, Index c1);

// Thin SVD, a = U diag(s) V^T, singular values descending.
struct Svd {
  DenseMatrix u;
  Vector s;
  DenseMatrix v;
};
// full_v = true returns all n right singular vectors (needed for null spaces).
Svd svd(const DenseMatrix& a, bool full_v = false);
Vector singular_values(const DenseMatrix& a);
// Numerical rank with tolerance max(rows, cols) * eps * sigma_max.
Index numerical_rank(const DenseMatrix& a);

// LU with partial pivoting. Throws InvalidArgument on an exactly singular
// pivot.
Vector lu_solve(const DenseMatrix& a, std::span<const double> b);
DenseMatrix inverse(const DenseMatrix& a);

}  // namespace augprec
