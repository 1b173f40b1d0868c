#include "augprec/augmentation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "augprec/errors.hpp"
#include "augprec/matching.hpp"

namespace augprec {

namespace {

std::vector<Index> rows_by_sparsity(const SparseMatrix& b) {
  std::vector<Index> order(static_cast<std::size_t>(b.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    return b.row_nnz(x) < b.row_nnz(y);
  });
  return order;
}

Index pattern_rank(const SparseMatrix& base, const SparseMatrix& b,
                   std::span<const Index> rows, Index skip) {
  BipartiteMatcher matcher(base.rows(), base.cols());
  for (Index i = 0; i < base.rows(); ++i)
    for (Index j : base.row_cols(i)) matcher.add_edge(i, j);
  for (Index r : rows)
    if (r != skip) matcher.add_clique(b.row_cols(r));
  return matcher.augment();
}

}  // namespace

const char* to_string(AugmentationKind k) {
  switch (k) {
    case AugmentationKind::partial: return "partial";
    case AugmentationKind::full: return "full";
    case AugmentationKind::identity: return "identity";
  }
  return "?";
}

WeightSelection WeightSelection::partial(std::vector<Index> rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  WeightSelection s;
  s.rows = std::move(rows);
  s.kind = AugmentationKind::partial;
  return s;
}

WeightSelection WeightSelection::full(Index m) {
  WeightSelection s;
  s.rows.resize(static_cast<std::size_t>(m));
  std::iota(s.rows.begin(), s.rows.end(), 0);
  s.kind = AugmentationKind::full;
  return s;
}

WeightSelection WeightSelection::identity(double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("identity augmentation needs rho > 0");
  WeightSelection s;
  s.kind = AugmentationKind::identity;
  s.rho = rho;
  return s;
}

Vector WeightSelection::weights(Index m) const {
  Vector w(static_cast<std::size_t>(m), 0.0);
  for (Index r : rows) {
    if (r < 0 || r >= m) throw IndexOutOfRange("weight row outside [0, m)");
    w[r] = 1.0;
  }
  return w;
}

bool WeightSelection::contains(Index row) const {
  return std::binary_search(rows.begin(), rows.end(), row);
}

SparseMatrix drop_small(const SparseMatrix& a) {
  const double threshold = std::numeric_limits<double>::epsilon() * max_abs(a);
  std::vector<Triplet> kept;
  for (const auto& t : a.triplets())
    if (!(std::abs(t.value) < threshold)) kept.push_back(t);
  return SparseMatrix::from_triplets(a.rows(), a.cols(), kept);
}

WeightSelection select_weight_rows(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != a.cols() || b.cols() != a.rows())
    throw DimensionMismatch("select_weight_rows: shapes");
  const Index n = a.rows();
  const SparseMatrix base = drop_small(a);

  BipartiteMatcher matcher(base);
  std::vector<Index> accepted;
  for (Index r : rows_by_sparsity(b)) {
    if (matcher.size() == n) break;
    if (b.row_nnz(r) == 0) continue;
    const Index before = matcher.size();
    const auto mark = matcher.checkpoint();
    matcher.add_clique(b.row_cols(r));
    if (matcher.augment() > before) {
      accepted.push_back(r);
      matcher.commit(mark);
    } else {
      matcher.rollback(mark);
    }
  }
  if (matcher.size() < n)
    throw StructuralDeficiency("structural rank " + std::to_string(matcher.size()) +
                               " < " + std::to_string(n) + " even with all rows of B");

  // A row accepted early can become redundant once later rows cover its
  // columns. Rank is monotone in the edge set, so one reverse pass leaves an
  // irredundant set.
  for (auto it = accepted.rbegin(); it != accepted.rend();) {
    const Index r = *it;
    if (pattern_rank(base, b, accepted, r) == n) {
      it = std::reverse_iterator(accepted.erase(std::next(it).base()));
    } else {
      ++it;
    }
  }
  return WeightSelection::partial(std::move(accepted));
}

AugmentedBlock build_augmented(const SparseMatrix& a, const SparseMatrix& b,
                               const WeightSelection& sel) {
  if (a.rows() != a.cols() || b.cols() != a.rows())
    throw DimensionMismatch("build_augmented: shapes");
  AugmentedBlock blk;
  blk.selection = sel;
  blk.droptol_used = std::numeric_limits<double>::epsilon() * max_abs(a);
  if (sel.kind == AugmentationKind::identity) {
    blk.ak = add(a, SparseMatrix::identity(a.rows(), sel.rho));
  } else {
    blk.ak = add(a, triple_product(b, sel.rows));
  }
  blk.factor = dense_cholesky(blk.ak.to_dense());
  return blk;
}

AugmentedBlock ensure_numerical_rank(AugmentedBlock blk, const SparseMatrix& b) {
  auto acceptable = [](AugmentedBlock& k) {
    const DenseMatrix d = k.ak.to_dense();
    try {
      CholeskyFactor f = dense_cholesky(d);
      if (condition_1norm(d, f) > kConditionCap) return false;
      k.factor = std::move(f);
      return true;
    } catch (const NotPositiveDefinite&) {
      return false;
    }
  };
  if (acceptable(blk)) return blk;
  if (blk.selection.kind == AugmentationKind::identity)
    throw StructuralDeficiency("identity augmentation is not numerically SPD");

  for (Index r : rows_by_sparsity(b)) {
    if (blk.selection.contains(r) || b.row_nnz(r) == 0) continue;
    const std::array<Index, 1> one{r};
    blk.ak = add(blk.ak, triple_product(b, one));
    auto& sel = blk.selection;
    sel.rows.insert(std::upper_bound(sel.rows.begin(), sel.rows.end(), r), r);
    sel.numerical_rows.push_back(r);
    if (static_cast<Index>(sel.rows.size()) == b.rows()) sel.kind = AugmentationKind::full;
    if (acceptable(blk)) return blk;
  }
  throw StructuralDeficiency("rows of B exhausted before A_k became well conditioned");
}

AugmentedBlock partial_augmentation(const SparseMatrix& a, const SparseMatrix& b) {
  const WeightSelection sel = select_weight_rows(a, b);
  AugmentedBlock blk;
  try {
    blk = build_augmented(a, b, sel);
  } catch (const NotPositiveDefinite&) {
    blk.ak = add(a, triple_product(b, sel.rows));
    blk.selection = sel;
    blk.droptol_used = std::numeric_limits<double>::epsilon() * max_abs(a);
  }
  return ensure_numerical_rank(std::move(blk), b);
}

}  // namespace augprec
