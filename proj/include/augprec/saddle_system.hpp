#pragma once

#include <span>

#include "augprec/dense_matrix.hpp"
#include "augprec/sparse_matrix.hpp"
#include "augprec/vector.hpp"

namespace augprec {

// (top, bottom) pair stored contiguously so Krylov solvers can treat it as a
// single vector of length n + m.
class BlockVector {
 public:
  BlockVector(Index n, Index m) : n_(n), data_(static_cast<std::size_t>(n + m), 0.0) {}
  BlockVector(Index n, Vector flat) : n_(n), data_(std::move(flat)) {}
  BlockVector(std::span<const double> top, std::span<const double> bottom);

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(data_.size()) - n_; }
  std::span<double> top() { return {data_.data(), static_cast<std::size_t>(n_)}; }
  std::span<double> bottom() { return std::span<double>(data_).subspan(n_); }
  std::span<const double> top() const { return {data_.data(), static_cast<std::size_t>(n_)}; }
  std::span<const double> bottom() const { return std::span<const double>(data_).subspan(n_); }
  const Vector& flat() const { return data_; }
  Vector& flat() { return data_; }

 private:
  Index n_;
  Vector data_;
};

// Symmetric saddle-point matrix K = [[A, B^T], [B, 0]] with A (n x n)
// symmetric PSD and B (m x n).
class SaddleSystem {
 public:
  // A is replaced by (A + A^T)/2; a warning goes to stderr when the
  // correction exceeds 1e-12 relative to max|A|.
  SaddleSystem(SparseMatrix a, SparseMatrix b);

  const SparseMatrix& a() const { return a_; }
  const SparseMatrix& b() const { return b_; }
  Index n() const { return a_.rows(); }
  Index m() const { return b_.rows(); }
  double symmetrization_correction() const { return sym_correction_; }

  BlockVector apply(const BlockVector& v) const;
  Vector apply(std::span<const double> flat) const;
  DenseMatrix assemble_dense() const;

 private:
  SparseMatrix a_;
  SparseMatrix b_;
  double sym_correction_ = 0.0;
};

inline BlockVector apply_K(const SaddleSystem& sys, const BlockVector& v) {
  return sys.apply(v);
}

struct WellPosedReport {
  bool b_full_rank = false;
  bool kernels_disjoint = false;
  Index nullity_a = 0;
  bool ok() const { return b_full_rank && kernels_disjoint; }
};

// Dense SVD ranks with tolerance max(rows, cols) * eps * sigma_max.
WellPosedReport check_wellposed(const SaddleSystem& sys);

}  // namespace augprec
