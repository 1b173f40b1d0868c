#include "augprec/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "augprec/errors.hpp"

namespace augprec {

CholeskyFactor::CholeskyFactor(DenseMatrix lower) : lower_(std::move(lower)) {}
CholeskyFactor::CholeskyFactor(SparseMatrix lower) : lower_(std::move(lower)) {}

Index CholeskyFactor::size() const {
  return std::visit([](const auto& l) { return l.rows(); }, lower_);
}

std::size_t CholeskyFactor::nnz() const {
  if (kind() == FactorKind::incomplete) return sparse_lower().nnz();
  const auto& l = dense_lower();
  std::size_t count = 0;
  for (Index i = 0; i < l.rows(); ++i)
    for (Index j = 0; j <= i; ++j)
      if (l(i, j) != 0.0) ++count;
  return count;
}

Vector CholeskyFactor::forward(std::span<const double> b) const {
  const Index n = size();
  if (static_cast<std::size_t>(n) != b.size()) throw DimensionMismatch("forward solve");
  Vector y(b.begin(), b.end());
  if (kind() == FactorKind::dense) {
    const auto& l = dense_lower();
    for (Index i = 0; i < n; ++i) {
      double s = y[i];
      for (Index j = 0; j < i; ++j) s -= l(i, j) * y[j];
      y[i] = s / l(i, i);
    }
  } else {
    const auto& l = sparse_lower();
    for (Index i = 0; i < n; ++i) {
      auto cols = l.row_cols(i);
      auto vals = l.row_values(i);
      double s = y[i];
      // Last stored entry of each row is the diagonal.
      for (std::size_t k = 0; k + 1 < cols.size(); ++k) s -= vals[k] * y[cols[k]];
      y[i] = s / vals.back();
    }
  }
  return y;
}

Vector CholeskyFactor::backward(std::span<const double> yin) const {
  const Index n = size();
  if (static_cast<std::size_t>(n) != yin.size()) throw DimensionMismatch("backward solve");
  Vector x(yin.begin(), yin.end());
  if (kind() == FactorKind::dense) {
    const auto& l = dense_lower();
    for (Index i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (Index j = i + 1; j < n; ++j) s -= l(j, i) * x[j];
      x[i] = s / l(i, i);
    }
  } else {
    const auto& l = sparse_lower();
    for (Index i = n - 1; i >= 0; --i) {
      auto cols = l.row_cols(i);
      auto vals = l.row_values(i);
      x[i] /= vals.back();
      for (std::size_t k = 0; k + 1 < cols.size(); ++k) x[cols[k]] -= vals[k] * x[i];
    }
  }
  return x;
}

Vector CholeskyFactor::solve(std::span<const double> b) const {
  return backward(forward(b));
}

DenseMatrix CholeskyFactor::to_dense() const {
  if (kind() == FactorKind::dense) return dense_lower();
  return sparse_lower().to_dense();
}

CholeskyFactor dense_cholesky(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("dense_cholesky needs square");
  const Index n = m.rows();
  DenseMatrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = m(j, j);
    for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0))
      throw NotPositiveDefinite("nonpositive pivot " + std::to_string(d) +
                                " at column " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

CholeskyFactor incomplete_cholesky(const SparseMatrix& m, double droptol,
                                   double shift) {
  if (m.rows() != m.cols()) throw DimensionMismatch("incomplete_cholesky needs square");
  if (droptol < 0.0) throw InvalidArgument("negative drop tolerance");
  const Index n = m.rows();

  // Lower part of each column of M (== row of the upper part, M symmetric).
  const SparseMatrix mt = transpose(m);

  // Columns of L built so far, entries below the diagonal with row > col.
  std::vector<std::vector<std::pair<Index, double>>> lcols(static_cast<std::size_t>(n));
  std::vector<double> ldiag(static_cast<std::size_t>(n), 0.0);
  // For each row j, the columns k < j with L(j, k) != 0 and the offset of
  // that entry inside lcols[k].
  std::vector<std::vector<std::pair<Index, std::size_t>>> row_refs(static_cast<std::size_t>(n));

  std::vector<double> work(static_cast<std::size_t>(n), 0.0);
  std::vector<char> occupied(static_cast<std::size_t>(n), 0);
  std::vector<Index> pattern;

  for (Index j = 0; j < n; ++j) {
    pattern.clear();
    double colnorm_sq = 0.0;
    auto touch = [&](Index i) {
      if (!occupied[i]) {
        occupied[i] = 1;
        pattern.push_back(i);
      }
    };
    touch(j);
    auto cols = mt.row_cols(j);
    auto vals = mt.row_values(j);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      const Index i = cols[p];
      if (i < j) continue;
      touch(i);
      work[i] += vals[p];
      colnorm_sq += vals[p] * vals[p];
    }
    work[j] += shift;
    const double diag_j = work[j];

    for (const auto& [k, off] : row_refs[j]) {
      const double ljk = lcols[k][off].second;
      work[j] -= ljk * ljk;
      for (std::size_t q = off + 1; q < lcols[k].size(); ++q) {
        const auto [i, lik] = lcols[k][q];
        touch(i);
        work[i] -= lik * ljk;
      }
    }

    const double pivot = work[j];
    // a pivot at roundoff level relative to the original diagonal is a zero pivot
    if (!(pivot > 16 * std::numeric_limits<double>::epsilon() * std::abs(diag_j)))
      throw BreakdownPivot("incomplete_cholesky: pivot " + std::to_string(pivot) +
                           " at column " + std::to_string(j));
    const double ljj = std::sqrt(pivot);
    ldiag[j] = ljj;
    const double threshold = droptol * std::sqrt(colnorm_sq);

    std::sort(pattern.begin(), pattern.end());
    for (Index i : pattern) {
      if (i != j) {
        const double lij = work[i] / ljj;
        if (lij != 0.0 && !(std::abs(lij) < threshold)) {
          row_refs[i].emplace_back(j, lcols[j].size());
          lcols[j].emplace_back(i, lij);
        }
      }
      work[i] = 0.0;
      occupied[i] = 0;
    }
  }

  std::vector<Triplet> t;
  for (Index j = 0; j < n; ++j) {
    t.push_back({j, j, ldiag[j]});
    for (const auto& [i, v] : lcols[j]) t.push_back({i, j, v});
  }
  return CholeskyFactor(SparseMatrix::from_triplets(n, n, t));
}

double condition_1norm(const DenseMatrix& m, const CholeskyFactor& f) {
  const Index n = m.rows();
  double inv_norm = 0.0;
  Vector e(static_cast<std::size_t>(n), 0.0);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = f.solve(e);
    e[j] = 0.0;
    double s = 0.0;
    for (double v : col) s += std::abs(v);
    inv_norm = std::max(inv_norm, s);
  }
  return norm_1(m) * inv_norm;
}

}  // namespace augprec
