#pragma once

#include <optional>
#include <vector>

#include "augprec/cholesky.hpp"
#include "augprec/sparse_matrix.hpp"

namespace augprec {

enum class AugmentationKind { partial, full, identity };

const char* to_string(AugmentationKind k);

// Rows of B picked for the 0/1 diagonal weight matrix W_k, or the identity
// shift rho for A + rho*I.
struct WeightSelection {
  std::vector<Index> rows;  // sorted, unique
  AugmentationKind kind = AugmentationKind::partial;
  double rho = 0.0;  // identity only
  // Rows (also present in `rows`) appended by ensure_numerical_rank rather
  // than by the structural phase.
  std::vector<Index> numerical_rows;

  static WeightSelection partial(std::vector<Index> rows);
  static WeightSelection full(Index m);
  static WeightSelection identity(double rho);

  Index rank() const { return static_cast<Index>(rows.size()); }
  // Diagonal of W_k as a length-m vector.
  Vector weights(Index m) const;
  bool contains(Index row) const;
};

struct AugmentedBlock {
  SparseMatrix ak;
  WeightSelection selection;
  double droptol_used = 0.0;
  std::optional<CholeskyFactor> factor;  // SPD certificate
};

// Removes entries with |a_ij| < eps * max|a|.
SparseMatrix drop_small(const SparseMatrix& a);

// Greedy structural selection: rows of B in ascending nonzero count (ties by
// index) are accepted when they raise the structural rank of
// drop_small(A) + sum b_i^T b_i. Redundant accepted rows are pruned so that
// every selected row is needed for full structural rank.
WeightSelection select_weight_rows(const SparseMatrix& a, const SparseMatrix& b);

// A + B^T W_k B (partial/full) or A + rho*I (identity); factors it densely as
// the SPD certificate. Throws NotPositiveDefinite.
AugmentedBlock build_augmented(const SparseMatrix& a, const SparseMatrix& b,
                               const WeightSelection& sel);

inline constexpr double kConditionCap = 1e14;

// Appends unselected rows of B (sparsest first) until the block factors and
// its 1-norm condition number is at most kConditionCap.
AugmentedBlock ensure_numerical_rank(AugmentedBlock blk, const SparseMatrix& b);

// select -> build -> ensure, the full pipeline for a partial augmentation.
AugmentedBlock partial_augmentation(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace augprec
