#include "augprec/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augprec/errors.hpp"

namespace augprec {

SparseMatrix::SparseMatrix(Index nrows, Index ncols)
    : nrows_(nrows), ncols_(ncols), row_ptr_(static_cast<std::size_t>(nrows) + 1, 0) {
  if (nrows < 0 || ncols < 0) throw InvalidArgument("negative dimension");
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols,
                                         std::span<const Triplet> entries) {
  SparseMatrix m(nrows, ncols);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw IndexOutOfRange("triplet (" + std::to_string(t.row) + ", " +
                            std::to_string(t.col) + ") outside matrix");
    if (!std::isfinite(t.value)) throw InvalidArgument("non-finite entry");
  }

  // Counting sort by row keeps input order within a row, so duplicate sums
  // are accumulated in a well-defined order.
  std::vector<Index> count(static_cast<std::size_t>(nrows) + 1, 0);
  for (const auto& t : entries) ++count[t.row + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::size_t> order(entries.size());
  {
    std::vector<Index> next(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < entries.size(); ++k)
      order[next[entries[k].row]++] = k;
  }

  std::vector<std::pair<Index, double>> row;
  for (Index i = 0; i < nrows; ++i) {
    row.clear();
    for (Index p = count[i]; p < count[i + 1]; ++p) {
      const auto& t = entries[order[p]];
      row.emplace_back(t.col, t.value);
    }
    std::stable_sort(row.begin(), row.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t k = 0;
    while (k < row.size()) {
      const Index col = row[k].first;
      double sum = 0.0;
      for (; k < row.size() && row[k].first == col; ++k) sum += row[k].second;
      if (sum != 0.0) {
        m.col_idx_.push_back(col);
        m.values_.push_back(sum);
      }
    }
    m.row_ptr_[i + 1] = static_cast<Index>(m.values_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d) {
  std::vector<Triplet> t;
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) t.push_back({i, j, d(i, j)});
  return from_triplets(d.rows(), d.cols(), t);
}

SparseMatrix SparseMatrix::identity(Index n, double value) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) t.push_back({i, i, value});
  return from_triplets(n, n, t);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  std::vector<Triplet> t;
  const auto n = static_cast<Index>(d.size());
  for (Index i = 0; i < n; ++i) t.push_back({i, i, d[i]});
  return from_triplets(n, n, t);
}

double SparseMatrix::coeff(Index i, Index j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - cols.begin())];
}

Vector SparseMatrix::diagonal() const {
  Vector d(static_cast<std::size_t>(std::min(nrows_, ncols_)), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = coeff(i, i);
  return d;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      d(i, col_idx_[p]) = values_[p];
  return d;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      t.push_back({i, col_idx_[p], values_[p]});
  return t;
}

Vector spmv(const SparseMatrix& m, std::span<const double> x) {
  if (static_cast<std::size_t>(m.cols()) != x.size())
    throw DimensionMismatch("spmv: " + std::to_string(m.cols()) +
                            " columns vs vector of length " +
                            std::to_string(x.size()));
  Vector y(static_cast<std::size_t>(m.rows()), 0.0);
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  for (Index i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (Index p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
    y[i] = s;
  }
  return y;
}

Vector spmv_transpose(const SparseMatrix& m, std::span<const double> x) {
  if (static_cast<std::size_t>(m.rows()) != x.size())
    throw DimensionMismatch("spmv_transpose");
  Vector y(static_cast<std::size_t>(m.cols()), 0.0);
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index p = rp[i]; p < rp[i + 1]; ++p) y[ci[p]] += v[p] * x[i];
  return y;
}

SparseMatrix transpose(const SparseMatrix& m) {
  std::vector<Triplet> t;
  t.reserve(m.nnz());
  for (Index i = 0; i < m.rows(); ++i) {
    auto cols = m.row_cols(i);
    auto vals = m.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({cols[k], i, vals[k]});
  }
  return SparseMatrix::from_triplets(m.cols(), m.rows(), t);
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha,
                 double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("sparse add");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  for (auto e : a.triplets()) t.push_back({e.row, e.col, alpha * e.value});
  for (auto e : b.triplets()) t.push_back({e.row, e.col, beta * e.value});
  return SparseMatrix::from_triplets(a.rows(), a.cols(), t);
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("sparse multiply");
  std::vector<Triplet> t;
  for (Index i = 0; i < a.rows(); ++i) {
    auto acols = a.row_cols(i);
    auto avals = a.row_values(i);
    for (std::size_t k = 0; k < acols.size(); ++k) {
      auto bcols = b.row_cols(acols[k]);
      auto bvals = b.row_values(acols[k]);
      for (std::size_t q = 0; q < bcols.size(); ++q)
        t.push_back({i, bcols[q], avals[k] * bvals[q]});
    }
  }
  return SparseMatrix::from_triplets(a.rows(), b.cols(), t);
}

SparseMatrix triple_product(const SparseMatrix& b, std::span<const Index> rows) {
  std::vector<Triplet> t;
  for (Index r : rows) {
    if (r < 0 || r >= b.rows())
      throw IndexOutOfRange("triple_product: row " + std::to_string(r) +
                            " outside [0, " + std::to_string(b.rows()) + ")");
    auto cols = b.row_cols(r);
    auto vals = b.row_values(r);
    for (std::size_t p = 0; p < cols.size(); ++p)
      for (std::size_t q = 0; q < cols.size(); ++q)
        t.push_back({cols[p], cols[q], vals[p] * vals[q]});
  }
  return SparseMatrix::from_triplets(b.cols(), b.cols(), t);
}

SparseMatrix weighted_gram(const SparseMatrix& b, std::span<const double> d) {
  if (static_cast<std::size_t>(b.cols()) != d.size())
    throw DimensionMismatch("weighted_gram");
  const SparseMatrix bt = transpose(b);
  std::vector<Triplet> t;
  // (B D B^T)_{ij} = sum_k b_ik d_k b_jk; walk columns k of B via rows of B^T.
  for (Index k = 0; k < bt.rows(); ++k) {
    auto rows = bt.row_cols(k);
    auto vals = bt.row_values(k);
    for (std::size_t p = 0; p < rows.size(); ++p)
      for (std::size_t q = 0; q < rows.size(); ++q)
        t.push_back({rows[p], rows[q], vals[p] * d[k] * vals[q]});
  }
  return SparseMatrix::from_triplets(b.rows(), b.rows(), t);
}

SparseMatrix principal_block(const SparseMatrix& m, Index i0, Index i1) {
  if (i0 < 0 || i1 > std::min(m.rows(), m.cols()) || i0 > i1)
    throw IndexOutOfRange("principal_block");
  std::vector<Triplet> t;
  for (Index i = i0; i < i1; ++i) {
    auto cols = m.row_cols(i);
    auto vals = m.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (cols[k] >= i0 && cols[k] < i1) t.push_back({i - i0, cols[k] - i0, vals[k]});
  }
  return SparseMatrix::from_triplets(i1 - i0, i1 - i0, t);
}

Index bandwidth(const SparseMatrix& m) {
  Index bw = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j : m.row_cols(i)) bw = std::max(bw, std::abs(i - j));
  return bw;
}

double max_abs(const SparseMatrix& m) {
  double mx = 0.0;
  for (double v : m.values()) mx = std::max(mx, std::abs(v));
  return mx;
}

double symmetry_defect(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("symmetry_defect");
  const SparseMatrix d = add(m, transpose(m), 1.0, -1.0);
  return max_abs(d);
}

}  // namespace augprec
