#include "augprec/dense_matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "augprec/errors.hpp"

namespace augprec {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> as_eigen(const DenseMatrix& a) {
  return {a.values().data(), a.rows(), a.cols()};
}

DenseMatrix from_eigen(const Eigen::MatrixXd& e) {
  DenseMatrix d(static_cast<Index>(e.rows()), static_cast<Index>(e.cols()));
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j) d(i, j) = e(i, j);
  return d;
}

}  // namespace

DenseMatrix::DenseMatrix(Index nrows, Index ncols, double fill)
    : nrows_(nrows),
      ncols_(ncols),
      values_(static_cast<std::size_t>(nrows) * static_cast<std::size_t>(ncols),
              fill) {
  if (nrows < 0 || ncols < 0) throw InvalidArgument("negative dimension");
}

DenseMatrix::DenseMatrix(Index nrows, Index ncols, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), values_(std::move(values)) {
  if (values_.size() !=
      static_cast<std::size_t>(nrows) * static_cast<std::size_t>(ncols))
    throw DimensionMismatch("dense value count does not match shape");
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix d(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  const auto n = static_cast<Index>(diag.size());
  DenseMatrix d(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = diag[i];
  return d;
}

Vector DenseMatrix::column(Index j) const {
  Vector c(static_cast<std::size_t>(nrows_));
  for (Index i = 0; i < nrows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(Index j, std::span<const double> v) {
  for (Index i = 0; i < nrows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("dense multiply");
  DenseMatrix c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (Index j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  if (static_cast<std::size_t>(a.cols()) != x.size())
    throw DimensionMismatch("dense matvec");
  Vector y(static_cast<std::size_t>(a.rows()), 0.0);
  for (Index i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b, double alpha,
                double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("dense add");
  DenseMatrix c(a.rows(), a.cols());
  auto cv = c.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] = alpha * av[i] + beta * bv[i];
  return c;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("symmetrize needs square");
  DenseMatrix s(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

double frobenius_norm(const DenseMatrix& a) { return norm2(a.values()); }

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double norm_1(const DenseMatrix& a) {
  double best = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Index i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix block(const DenseMatrix& a, Index r0, Index r1, Index c0, Index c1) {
  DenseMatrix b(r1 - r0, c1 - c0);
  for (Index i = r0; i < r1; ++i)
    for (Index j = c0; j < c1; ++j) b(i - r0, j - c0) = a(i, j);
  return b;
}

Svd svd(const DenseMatrix& a, bool full_v) {
  const Eigen::MatrixXd e = as_eigen(a);
  const unsigned opts = full_v ? (Eigen::ComputeThinU | Eigen::ComputeFullV)
                               : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Eigen::MatrixXd> solver(e, opts);
  Svd out;
  out.u = from_eigen(solver.matrixU());
  out.v = from_eigen(solver.matrixV());
  const auto& s = solver.singularValues();
  out.s.assign(s.data(), s.data() + s.size());
  return out;
}

Vector singular_values(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  const Eigen::MatrixXd e = as_eigen(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> solver(e);
  const auto& s = solver.singularValues();
  return Vector(s.data(), s.data() + s.size());
}

Index numerical_rank(const DenseMatrix& a) {
  const Vector s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * s.front();
  return static_cast<Index>(
      std::count_if(s.begin(), s.end(), [tol](double v) { return v > tol; }));
}

Vector lu_solve(const DenseMatrix& a, std::span<const double> b) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != b.size())
    throw DimensionMismatch("lu_solve");
  const Eigen::MatrixXd e = as_eigen(a);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(e);
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)
    throw InvalidArgument("lu_solve: exactly singular matrix");
  const Eigen::VectorXd rhs =
      Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = lu.solve(rhs);
  return Vector(x.data(), x.data() + x.size());
}

DenseMatrix inverse(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse needs square");
  const Eigen::MatrixXd e = as_eigen(a);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(e);
  if (a.rows() > 0 && lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)
    throw InvalidArgument("inverse: exactly singular matrix");
  return from_eigen(lu.inverse());
}

}  // namespace augprec
