#include "augprec/precond.hpp"

#include <algorithm>
#include <cmath>

#include "augprec/errors.hpp"

namespace augprec {

const char* to_string(LeadingKind k) {
  switch (k) {
    case LeadingKind::exact: return "exact";
    case LeadingKind::diagonal: return "diagonal";
    case LeadingKind::ic: return "ic";
    case LeadingKind::inner_cg: return "inner_cg";
  }
  return "?";
}

LeadingSolver LeadingSolver::exact(const AugmentedBlock& blk) {
  LeadingSolver s;
  s.kind_ = LeadingKind::exact;
  s.n_ = blk.ak.rows();
  s.payload_ = Dense{std::make_shared<const CholeskyFactor>(
      blk.factor ? *blk.factor : dense_cholesky(blk.ak.to_dense()))};
  return s;
}

LeadingSolver LeadingSolver::diagonal(const SparseMatrix& ak) {
  LeadingSolver s;
  s.kind_ = LeadingKind::diagonal;
  s.n_ = ak.rows();
  Vector inv = ak.diagonal();
  for (std::size_t i = 0; i < inv.size(); ++i) {
    if (!(inv[i] > 0.0))
      throw NonpositiveDiagonal("diag(A_k) entry " + std::to_string(i) + " is " +
                                std::to_string(inv[i]));
    inv[i] = 1.0 / inv[i];
  }
  s.payload_ = Diagonal{std::move(inv)};
  return s;
}

LeadingSolver LeadingSolver::ic(const SparseMatrix& ak, double droptol) {
  LeadingSolver s;
  s.kind_ = LeadingKind::ic;
  s.n_ = ak.rows();
  try {
    s.payload_ = Ic{std::make_shared<const CholeskyFactor>(incomplete_cholesky(ak, droptol))};
  } catch (const BreakdownPivot&) {
    const Vector d = ak.diagonal();
    s.ic_shift_ = 1e-8 * (d.empty() ? 0.0 : *std::max_element(d.begin(), d.end()));
    s.payload_ = Ic{std::make_shared<const CholeskyFactor>(
        incomplete_cholesky(ak, droptol, s.ic_shift_))};
  }
  return s;
}

LeadingSolver LeadingSolver::inner_cg(const SparseMatrix& ak, InnerCgConfig cfg) {
  if (cfg.split < 0 || cfg.split >= ak.rows())
    throw InvalidArgument("inner_cg: block-Jacobi split outside [0, n)");
  LeadingSolver s;
  s.kind_ = LeadingKind::inner_cg;
  s.n_ = ak.rows();
  InnerCg p;
  p.ak = std::make_shared<const SparseMatrix>(ak);
  p.cfg = cfg;
  p.stats = std::make_shared<InnerCgStats>();
  // The diagonal blocks are banded in the intended use, so exact sparse
  // factors (droptol 0) stay cheap.
  if (cfg.split == 0) {
    p.first = std::make_shared<const CholeskyFactor>(incomplete_cholesky(ak, 0.0));
  } else {
    p.first = std::make_shared<const CholeskyFactor>(
        incomplete_cholesky(principal_block(ak, 0, cfg.split), 0.0));
    p.second = std::make_shared<const CholeskyFactor>(
        incomplete_cholesky(principal_block(ak, cfg.split, ak.rows()), 0.0));
  }
  s.payload_ = std::move(p);
  return s;
}

LeadingSolver LeadingSolver::build(const AugmentedBlock& blk, const LeadingSpec& spec) {
  switch (spec.kind) {
    case LeadingKind::exact: return exact(blk);
    case LeadingKind::diagonal: return diagonal(blk.ak);
    case LeadingKind::ic: return ic(blk.ak, spec.droptol);
    case LeadingKind::inner_cg: return inner_cg(blk.ak, spec.cg);
  }
  throw InvalidArgument("unknown leading kind");
}

Vector LeadingSolver::apply_inverse(std::span<const double> r) const {
  if (static_cast<Index>(r.size()) != n_)
    throw DimensionMismatch("leading apply_inverse: vector length");
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Dense> || std::is_same_v<T, Ic>) {
          return p.factor->solve(r);
        } else if constexpr (std::is_same_v<T, Diagonal>) {
          Vector out(r.size());
          for (std::size_t i = 0; i < r.size(); ++i) out[i] = p.inv[i] * r[i];
          return out;
        } else {
          const LinearOperator op = [&p](std::span<const double> x) {
            return spmv(*p.ak, x);
          };
          const LinearOperator block_jacobi = [&p](std::span<const double> x) {
            if (!p.second) return p.first->solve(x);
            const auto split = static_cast<std::size_t>(p.cfg.split);
            Vector out = p.first->solve(x.first(split));
            const Vector tail = p.second->solve(x.subspan(split));
            out.insert(out.end(), tail.begin(), tail.end());
            return out;
          };
          const SolveReport rep = pcg(op, block_jacobi, r, p.cfg.tol, p.cfg.maxit);
          ++p.stats->applications;
          p.stats->total_iterations += rep.iterations;
          if (rep.status != SolveStatus::converged) ++p.stats->max_iteration_breaches;
          return rep.solution;
        }
      },
      payload_);
}

std::size_t LeadingSolver::factor_nnz() const {
  if (const auto* p = std::get_if<Ic>(&payload_)) return p->factor->nnz();
  return 0;
}

InnerCgStats LeadingSolver::inner_stats() const {
  if (const auto* p = std::get_if<InnerCg>(&payload_)) return *p->stats;
  return {};
}

BlockDiagPrecond::BlockDiagPrecond(LeadingSolver leading, SchurOperator schur)
    : leading_(std::move(leading)), schur_(std::move(schur)) {}

Vector BlockDiagPrecond::apply_inverse(std::span<const double> flat) const {
  const auto nn = static_cast<std::size_t>(n());
  if (flat.size() != nn + static_cast<std::size_t>(m()))
    throw DimensionMismatch("preconditioner: vector length");
  Vector out = leading_.apply_inverse(flat.first(nn));
  const Vector bottom = schur_.apply_inverse(flat.subspan(nn));
  out.insert(out.end(), bottom.begin(), bottom.end());
  return out;
}

BlockVector BlockDiagPrecond::apply_inverse(const BlockVector& v) const {
  return BlockVector(v.n(), apply_inverse(std::span<const double>(v.flat())));
}

LinearOperator BlockDiagPrecond::as_operator() const {
  return [this](std::span<const double> x) { return apply_inverse(x); };
}

BlockDiagPrecond make_ideal(const AugmentedBlock& blk, const SparseMatrix& b) {
  return BlockDiagPrecond(LeadingSolver::exact(blk), exact_schur(blk, b));
}

BlockDiagPrecond make_diagonal(const AugmentedBlock& blk, const SparseMatrix& b) {
  return BlockDiagPrecond(LeadingSolver::diagonal(blk.ak),
                          diagonal_schur(blk.ak.diagonal(), b));
}

BlockDiagPrecond make_ic(const AugmentedBlock& blk, const SparseMatrix& b, double droptol) {
  if (droptol < 0.0) throw InvalidArgument("make_ic: negative drop tolerance");
  return BlockDiagPrecond(LeadingSolver::ic(blk.ak, droptol),
                          diagonal_schur(blk.ak.diagonal(), b));
}

BlockDiagPrecond make_with_schur(const AugmentedBlock& blk, const LeadingSpec& leading,
                                 SchurOperator schur) {
  for (Index r : blk.selection.rows)
    if (r >= schur.size())
      throw DimensionMismatch("weight row " + std::to_string(r) +
                              " outside the Schur block of size " +
                              std::to_string(schur.size()));
  return BlockDiagPrecond(LeadingSolver::build(blk, leading), std::move(schur));
}

SolveReport solve_minres(const SaddleSystem& sys, const BlockDiagPrecond& p,
                         std::span<const double> rhs, double tol, Index maxit) {
  if (p.flexible())
    throw InvalidArgument("MINRES needs a fixed preconditioner; use FGMRES for inner CG");
  if (p.n() != sys.n() || p.m() != sys.m())
    throw DimensionMismatch("preconditioner and system sizes differ");
  const LinearOperator k = [&sys](std::span<const double> x) { return sys.apply(x); };
  return minres(k, p.as_operator(), rhs, tol, maxit);
}

SolveReport solve_fgmres(const SaddleSystem& sys, const BlockDiagPrecond& p,
                         std::span<const double> rhs, double tol, Index restart,
                         Index maxit) {
  if (p.n() != sys.n() || p.m() != sys.m())
    throw DimensionMismatch("preconditioner and system sizes differ");
  const LinearOperator k = [&sys](std::span<const double> x) { return sys.apply(x); };
  return fgmres(k, p.as_operator(), rhs, tol, restart, maxit);
}

}  // namespace augprec
