#include "augprec/sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augprec/errors.hpp"

namespace augprec {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymEigen sym_eigen(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("sym_eigen needs square");
  if (m.rows() > kEigenDimensionCap)
    throw InvalidArgument("sym_eigen: dimension " + std::to_string(m.rows()) +
                          " exceeds cap " + std::to_string(kEigenDimensionCap));
  const Index n = m.rows();
  DenseMatrix a = symmetrize(m);
  DenseMatrix v = DenseMatrix::identity(n);
  const double target = 1e-14 * frobenius_norm(a);

  double off = off_diagonal_norm(a);
  for (int sweep = 0; sweep < 100 && off > target; ++sweep) {
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    const double next = off_diagonal_norm(a);
    if (!(next < off)) break;
    off = next;
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index x, Index y) { return a(x, x) < a(y, y); });
  SymEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = DenseMatrix(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (Index i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Vector sym_eigenvalues(const DenseMatrix& m) { return sym_eigen(m).values; }

}  // namespace augprec
