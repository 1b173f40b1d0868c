#include "augprec/schur.hpp"

#include <cmath>
#include <limits>

#include "augprec/errors.hpp"

namespace augprec {

const char* to_string(SchurKind k) {
  switch (k) {
    case SchurKind::exact: return "exact";
    case SchurKind::diagonal: return "diagonal";
    case SchurKind::wki: return "wki";
    case SchurKind::bfbt: return "bfbt";
    case SchurKind::additive: return "additive";
  }
  return "?";
}

Vector SchurOperator::apply_inverse(std::span<const double> r) const {
  if (static_cast<Index>(r.size()) != m_)
    throw DimensionMismatch("schur apply_inverse: vector length");
  return apply_(r);
}

NullspaceBasis nullspace_basis(const SparseMatrix& b) {
  const Index m = b.rows();
  const Index n = b.cols();
  const DenseMatrix bd = b.to_dense();
  const Svd s = svd(bd, /*full_v=*/true);
  const double tol = static_cast<double>(std::max(m, n)) *
                     std::numeric_limits<double>::epsilon() *
                     (s.s.empty() ? 0.0 : s.s.front());
  Index rank = 0;
  for (double v : s.s)
    if (v > tol) ++rank;
  if (rank < m)
    throw RankDeficientB("B has numerical rank " + std::to_string(rank) + " < m = " +
                         std::to_string(m));
  return {block(s.v, 0, n, m, n)};
}

DenseMatrix schur_matrix(const AugmentedBlock& blk, const SparseMatrix& b) {
  const CholeskyFactor f =
      blk.factor ? *blk.factor : dense_cholesky(blk.ak.to_dense());
  const Index m = b.rows();
  // Columns of L^{-1} B^T; S = (L^{-1}B^T)^T (L^{-1}B^T) is symmetric by
  // construction.
  const DenseMatrix bt = transpose(b.to_dense());
  DenseMatrix y(b.cols(), m);
  for (Index j = 0; j < m; ++j) y.set_column(j, f.forward(bt.column(j)));
  return multiply(transpose(y), y);
}

SchurOperator exact_schur(const AugmentedBlock& blk, const SparseMatrix& b) {
  auto factor = std::make_shared<CholeskyFactor>(dense_cholesky(schur_matrix(blk, b)));
  return SchurOperator(SchurKind::exact, b.rows(),
                       [factor](std::span<const double> r) { return factor->solve(r); });
}

SchurOperator diagonal_schur(std::span<const double> d, const SparseMatrix& b) {
  Vector inv(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw NonpositiveDiagonal("diagonal entry " + std::to_string(i));
    inv[i] = 1.0 / d[i];
  }
  auto factor = std::make_shared<CholeskyFactor>(
      dense_cholesky(weighted_gram(b, inv).to_dense()));
  return SchurOperator(SchurKind::diagonal, b.rows(),
                       [factor](std::span<const double> r) { return factor->solve(r); });
}

DenseMatrix schur_inverse_additive(const SparseMatrix& a, const SparseMatrix& b,
                                   const WeightSelection& sel,
                                   const NullspaceBasis& basis) {
  const DenseMatrix ad = a.to_dense();
  const DenseMatrix bd = b.to_dense();
  const DenseMatrix& z = basis.z;
  const DenseMatrix zt = transpose(z);

  const DenseMatrix reduced = symmetrize(multiply(zt, multiply(ad, z)));
  DenseMatrix reduced_inv;
  try {
    const CholeskyFactor f = dense_cholesky(reduced);
    if (condition_1norm(reduced, f) > kConditionCap)
      throw SingularReducedHessian("Z^T A Z is numerically singular");
    reduced_inv = DenseMatrix(reduced.rows(), reduced.cols());
    Vector e(static_cast<std::size_t>(reduced.rows()), 0.0);
    for (Index j = 0; j < reduced.rows(); ++j) {
      e[j] = 1.0;
      reduced_inv.set_column(j, f.solve(e));
      e[j] = 0.0;
    }
  } catch (const NotPositiveDefinite&) {
    throw SingularReducedHessian("Z^T A Z is not positive definite");
  }

  const DenseMatrix v = multiply(z, multiply(reduced_inv, zt));
  const DenseMatrix middle = add(ad, multiply(ad, multiply(v, ad)), 1.0, -1.0);

  // (BB^T)^{-1} B  (m x n)
  const DenseMatrix bbt = multiply(bd, transpose(bd));
  const CholeskyFactor gram = dense_cholesky(bbt);
  DenseMatrix pinv(bd.rows(), bd.cols());
  for (Index j = 0; j < bd.cols(); ++j) pinv.set_column(j, gram.solve(bd.column(j)));

  DenseMatrix result = multiply(pinv, multiply(middle, transpose(pinv)));
  const Vector w = sel.weights(b.rows());
  for (Index i = 0; i < b.rows(); ++i) result(i, i) += w[i];
  return symmetrize(result);
}

SchurOperator wki_operator(const WeightSelection& sel, double beta, Index m) {
  if (!(beta > 0.0)) throw InvalidArgument("WkI needs beta > 0");
  Vector diag = sel.weights(m);
  for (double& d : diag) d += beta;
  return SchurOperator(
      SchurKind::wki, m,
      [diag = std::move(diag)](std::span<const double> r) {
        Vector out(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = diag[i] * r[i];
        return out;
      },
      beta);
}

SchurOperator bfbt_operator(const SparseMatrix& a, const SparseMatrix& b,
                            const WeightSelection& sel) {
  struct State {
    SparseMatrix a;
    SparseMatrix b;
    Vector w;
    CholeskyFactor gram;
  };
  const Vector ones(static_cast<std::size_t>(b.cols()), 1.0);
  CholeskyFactor gram = [&] {
    try {
      return incomplete_cholesky(weighted_gram(b, ones), 0.0);
    } catch (const BreakdownPivot& e) {
      throw NotPositiveDefinite(std::string("BB^T: ") + e.what());
    }
  }();
  auto state = std::make_shared<State>(State{a, b, sel.weights(b.rows()), std::move(gram)});
  return SchurOperator(SchurKind::bfbt, b.rows(), [state](std::span<const double> r) {
    const Vector t = state->gram.solve(r);
    const Vector u = spmv(state->b, spmv(state->a, spmv_transpose(state->b, t)));
    Vector out = state->gram.solve(u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += state->w[i] * r[i];
    return out;
  });
}

}  // namespace augprec
