#pragma once

#include <memory>
#include <span>
#include <variant>

#include "augprec/augmentation.hpp"
#include "augprec/cholesky.hpp"
#include "augprec/krylov.hpp"
#include "augprec/saddle_system.hpp"
#include "augprec/schur.hpp"

namespace augprec {

enum class LeadingKind { exact, diagonal, ic, inner_cg };

const char* to_string(LeadingKind k);

struct InnerCgConfig {
  double tol = 0.1;
  Index maxit = 200;
  // Block-Jacobi split: blocks [0, split) and [split, n). 0 means one block.
  Index split = 0;
};

struct LeadingSpec {
  LeadingSpec() = default;
  LeadingSpec(LeadingKind k) : kind(k) {}  // NOLINT(google-explicit-constructor)

  LeadingKind kind = LeadingKind::exact;
  double droptol = 0.01;  // ic only
  InnerCgConfig cg;       // inner_cg only
};

// Counters shared by all copies of an inner-CG leading solver.
struct InnerCgStats {
  Index applications = 0;
  Index total_iterations = 0;
  Index max_iteration_breaches = 0;
};

// SPD approximation of A_k^{-1}.
class LeadingSolver {
 public:
  static LeadingSolver exact(const AugmentedBlock& blk);
  static LeadingSolver diagonal(const SparseMatrix& ak);
  // Retries once with a diagonal shift of 1e-8 * max diag on breakdown.
  static LeadingSolver ic(const SparseMatrix& ak, double droptol);
  static LeadingSolver inner_cg(const SparseMatrix& ak, InnerCgConfig cfg);
  static LeadingSolver build(const AugmentedBlock& blk, const LeadingSpec& spec);

  LeadingKind kind() const { return kind_; }
  Index size() const { return n_; }
  bool flexible() const { return kind_ == LeadingKind::inner_cg; }
  Vector apply_inverse(std::span<const double> r) const;
  // Stored entries of the IC factor (0 for other kinds).
  std::size_t factor_nnz() const;
  double ic_shift() const { return ic_shift_; }
  InnerCgStats inner_stats() const;

 private:
  struct Dense {
    std::shared_ptr<const CholeskyFactor> factor;
  };
  struct Diagonal {
    Vector inv;
  };
  struct Ic {
    std::shared_ptr<const CholeskyFactor> factor;
  };
  struct InnerCg {
    std::shared_ptr<const SparseMatrix> ak;
    std::shared_ptr<const CholeskyFactor> first;
    std::shared_ptr<const CholeskyFactor> second;  // null when split == 0
    InnerCgConfig cfg;
    std::shared_ptr<InnerCgStats> stats;
  };

  LeadingKind kind_ = LeadingKind::exact;
  Index n_ = 0;
  double ic_shift_ = 0.0;
  std::variant<Dense, Diagonal, Ic, InnerCg> payload_;
};

// Block-diagonal SPD preconditioner diag(leading, schur), applied as its
// inverse.
class BlockDiagPrecond {
 public:
  BlockDiagPrecond(LeadingSolver leading, SchurOperator schur);

  const LeadingSolver& leading() const { return leading_; }
  const SchurOperator& schur() const { return schur_; }
  bool flexible() const { return leading_.flexible(); }
  Index n() const { return leading_.size(); }
  Index m() const { return schur_.size(); }

  BlockVector apply_inverse(const BlockVector& v) const;
  Vector apply_inverse(std::span<const double> flat) const;
  LinearOperator as_operator() const;

 private:
  LeadingSolver leading_;
  SchurOperator schur_;
};

// diag(A_k, S_k)
BlockDiagPrecond make_ideal(const AugmentedBlock& blk, const SparseMatrix& b);
// diag(diag(A_k), B diag(A_k)^{-1} B^T)
BlockDiagPrecond make_diagonal(const AugmentedBlock& blk, const SparseMatrix& b);
// diag(IC(A_k), B diag(A_k)^{-1} B^T); the Schur block deliberately ignores
// the IC factor.
BlockDiagPrecond make_ic(const AugmentedBlock& blk, const SparseMatrix& b, double droptol);
BlockDiagPrecond make_with_schur(const AugmentedBlock& blk, const LeadingSpec& leading,
                                 SchurOperator schur);

inline BlockVector apply_inverse(const BlockDiagPrecond& p, const BlockVector& v) {
  return p.apply_inverse(v);
}

// MINRES on K with preconditioner P. Rejects flexible preconditioners.
SolveReport solve_minres(const SaddleSystem& sys, const BlockDiagPrecond& p,
                         std::span<const double> rhs, double tol, Index maxit);
SolveReport solve_fgmres(const SaddleSystem& sys, const BlockDiagPrecond& p,
                         std::span<const double> rhs, double tol, Index restart,
                         Index maxit);

}  // namespace augprec
