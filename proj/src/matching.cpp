#include "augprec/matching.hpp"

#include "augprec/errors.hpp"

namespace augprec {

BipartiteMatcher::BipartiteMatcher(Index nrows, Index ncols)
    : adj_(static_cast<std::size_t>(nrows)),
      row_match_(static_cast<std::size_t>(nrows), -1),
      col_match_(static_cast<std::size_t>(ncols), -1),
      col_stamp_(static_cast<std::size_t>(ncols), 0) {}

BipartiteMatcher::BipartiteMatcher(const SparseMatrix& pattern)
    : BipartiteMatcher(pattern.rows(), pattern.cols()) {
  for (Index i = 0; i < pattern.rows(); ++i) {
    auto cols = pattern.row_cols(i);
    adj_[i].assign(cols.begin(), cols.end());
  }
  augment();
}

void BipartiteMatcher::add_edge(Index row, Index col) {
  log_.emplace_back(row, adj_[row].size());
  adj_[row].push_back(col);
}

void BipartiteMatcher::add_clique(std::span<const Index> support) {
  for (Index r : support)
    for (Index c : support) add_edge(r, c);
}

std::size_t BipartiteMatcher::checkpoint() {
  snapshots_.push_back({log_.size(), row_match_, col_match_, size_});
  return snapshots_.size() - 1;
}

void BipartiteMatcher::rollback(std::size_t mark) {
  if (mark >= snapshots_.size()) throw IndexOutOfRange("rollback: stale checkpoint");
  Snapshot& s = snapshots_[mark];
  while (log_.size() > s.log_size) {
    const auto [row, old_size] = log_.back();
    adj_[row].resize(old_size);
    log_.pop_back();
  }
  row_match_ = std::move(s.row_match);
  col_match_ = std::move(s.col_match);
  size_ = s.size;
  snapshots_.resize(mark);
}

bool BipartiteMatcher::try_augment(Index row) {
  for (Index c : adj_[row]) {
    if (col_stamp_[c] == stamp_) continue;
    col_stamp_[c] = stamp_;
    if (col_match_[c] < 0 || try_augment(col_match_[c])) {
      col_match_[c] = row;
      row_match_[row] = c;
      return true;
    }
  }
  return false;
}

Index BipartiteMatcher::augment() {
  bool progress = true;
  while (progress) {
    progress = false;
    for (Index r = 0; r < static_cast<Index>(adj_.size()); ++r) {
      if (row_match_[r] >= 0) continue;
      ++stamp_;
      if (try_augment(r)) {
        ++size_;
        progress = true;
      }
    }
  }
  return size_;
}

Index structural_rank(const SparseMatrix& m) { return BipartiteMatcher(m).size(); }

}  // namespace augprec
