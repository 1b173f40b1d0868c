#include "augprec/saddle_system.hpp"

#include <iostream>

#include "augprec/errors.hpp"

namespace augprec {

BlockVector::BlockVector(std::span<const double> top, std::span<const double> bottom)
    : n_(static_cast<Index>(top.size())) {
  data_.reserve(top.size() + bottom.size());
  data_.insert(data_.end(), top.begin(), top.end());
  data_.insert(data_.end(), bottom.begin(), bottom.end());
}

SaddleSystem::SaddleSystem(SparseMatrix a, SparseMatrix b) : b_(std::move(b)) {
  if (a.rows() != a.cols()) throw DimensionMismatch("A must be square");
  if (b_.cols() != a.rows())
    throw DimensionMismatch("B has " + std::to_string(b_.cols()) +
                            " columns, A is " + std::to_string(a.rows()));
  const double scale = max_abs(a);
  sym_correction_ = scale > 0.0 ? 0.5 * symmetry_defect(a) / scale : 0.0;
  if (sym_correction_ > 1e-12)
    std::cerr << "warning: symmetrizing A, relative correction " << sym_correction_
              << '\n';
  a_ = add(a, transpose(a), 0.5, 0.5);
}

Vector SaddleSystem::apply(std::span<const double> flat) const {
  const auto nn = static_cast<std::size_t>(n());
  if (flat.size() != nn + static_cast<std::size_t>(m()))
    throw DimensionMismatch("apply_K: vector length");
  auto top = flat.first(nn);
  auto bottom = flat.subspan(nn);
  Vector out = spmv(a_, top);
  const Vector bty = spmv_transpose(b_, bottom);
  axpy(1.0, bty, out);
  const Vector bx = spmv(b_, top);
  out.insert(out.end(), bx.begin(), bx.end());
  return out;
}

BlockVector SaddleSystem::apply(const BlockVector& v) const {
  if (v.n() != n() || v.m() != m()) throw DimensionMismatch("apply_K: block sizes");
  return BlockVector(n(), apply(std::span<const double>(v.flat())));
}

DenseMatrix SaddleSystem::assemble_dense() const {
  const Index nn = n();
  DenseMatrix k(nn + m(), nn + m());
  for (const auto& t : a_.triplets()) k(t.row, t.col) = t.value;
  for (const auto& t : b_.triplets()) {
    k(nn + t.row, t.col) = t.value;
    k(t.col, nn + t.row) = t.value;
  }
  return k;
}

WellPosedReport check_wellposed(const SaddleSystem& sys) {
  WellPosedReport r;
  const DenseMatrix a = sys.a().to_dense();
  const DenseMatrix b = sys.b().to_dense();
  r.b_full_rank = numerical_rank(b) == sys.m();
  DenseMatrix stacked(sys.n() + sys.m(), sys.n());
  for (Index i = 0; i < sys.n(); ++i)
    for (Index j = 0; j < sys.n(); ++j) stacked(i, j) = a(i, j);
  for (Index i = 0; i < sys.m(); ++i)
    for (Index j = 0; j < sys.n(); ++j) stacked(sys.n() + i, j) = b(i, j);
  r.kernels_disjoint = numerical_rank(stacked) == sys.n();
  r.nullity_a = sys.n() - numerical_rank(a);
  return r;
}

}  // namespace augprec
