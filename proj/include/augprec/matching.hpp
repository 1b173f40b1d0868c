#pragma once

#include <algorithm>
#include <vector>

#include "augprec/sparse_matrix.hpp"

namespace augprec {

// Maximum cardinality matching between the rows and columns of a sparsity
// pattern, grown incrementally by augmenting paths. rollback() restores the
// edge set and the matching saved by checkpoint().
class BipartiteMatcher {
 public:
  BipartiteMatcher(Index nrows, Index ncols);
  explicit BipartiteMatcher(const SparseMatrix& pattern);

  void add_edge(Index row, Index col);
  // Edges of the clique support x support.
  void add_clique(std::span<const Index> support);

  // Marks are only valid until a rollback to an earlier mark.
  std::size_t checkpoint();
  void rollback(std::size_t mark);
  // Drops the snapshot at mark and later ones, keeping the current state.
  void commit(std::size_t mark) { snapshots_.resize(std::min(mark, snapshots_.size())); }

  // Augments from every free row until no augmenting path remains.
  // Returns the matching size.
  Index augment();
  Index size() const { return size_; }

 private:
  bool try_augment(Index row);

  std::vector<std::vector<Index>> adj_;
  std::vector<Index> row_match_;
  std::vector<Index> col_match_;
  std::vector<unsigned> col_stamp_;
  unsigned stamp_ = 0;
  Index size_ = 0;
  // (row, adjacency size before the edge was pushed)
  std::vector<std::pair<Index, std::size_t>> log_;
  struct Snapshot {
    std::size_t log_size;
    std::vector<Index> row_match, col_match;
    Index size;
  };
  std::vector<Snapshot> snapshots_;
};

// Size of a maximum bipartite matching on the nonzero pattern of m.
Index structural_rank(const SparseMatrix& m);

}  // namespace augprec
