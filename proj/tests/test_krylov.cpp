#include <gtest/gtest.h>

#include <numeric>

#include "augprec/errors.hpp"
#include "augprec/generators.hpp"
#include "augprec/krylov.hpp"
#include "augprec/precond.hpp"
#include "test_util.hpp"

using namespace augprec;
using namespace testutil;

namespace {

WeightSelection first_rows(Index k) {
  std::vector<Index> rows(static_cast<std::size_t>(k));
  std::iota(rows.begin(), rows.end(), 0);
  return WeightSelection::partial(rows);
}

LinearOperator op_of(const SparseMatrix& m) {
  return [&m](std::span<const double> x) { return spmv(m, x); };
}

LinearOperator identity_op() {
  return [](std::span<const double> x) { return Vector(x.begin(), x.end()); };
}

// Textbook PCG on dense Eigen matrices, used as the reference iteration count.
int reference_pcg(const Eigen::MatrixXd& a, const Eigen::MatrixXd& minv, const Eigen::VectorXd& b,
                  double tol) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size()), r = b, z = minv * r, p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= 1000; ++it) {
    const Eigen::VectorXd ap = a * p;
    const double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= tol * b.norm()) return it;
    z = minv * r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return -1;
}

int distinct_clusters(const SaddleSystem& sys, const BlockDiagPrecond& p, double width) {
  const Index n = sys.n() + sys.m();
  Eigen::MatrixXd minv(n, n);
  Vector e(static_cast<std::size_t>(n), 0.0);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    minv.col(j) = to_eigen(p.apply_inverse(e));
    e[j] = 0.0;
  }
  const Eigen::VectorXcd ev = (minv * to_eigen(sys.assemble_dense())).eigenvalues();
  std::vector<double> re;
  for (auto c : ev) re.push_back(c.real());
  std::sort(re.begin(), re.end());
  int clusters = 1;
  for (std::size_t i = 1; i < re.size(); ++i)
    if (re[i] - re[i - 1] > width) ++clusters;
  return clusters;
}

}  // namespace

TEST(Minres, ZeroRhs) {
  const SparseMatrix a = SparseMatrix::identity(4);
  const SolveReport r = minres(op_of(a), identity_op(), Vector(4, 0.0), 1e-10, 10);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.solution, Vector(4, 0.0));
  EXPECT_EQ(r.relative_residuals.size(), 1u);
}

TEST(Minres, IdealPreconditionerIterationBounds) {
  const SaddleSystem sys = generate_random_saddle({GeneratorKind::random_saddle, 40, 12, 3}, 1);
  const BlockDiagPrecond p = make_ideal(build_augmented(sys.a(), sys.b(), first_rows(3)), sys.b());
  std::mt19937_64 rng(91);
  const Vector b = random_vector(52, rng);
  const SolveReport r = solve_minres(sys, p, b, 1e-10, 100);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 6);
  EXPECT_LE(r.true_relative_residual, 10 * 1e-10);

  const SaddleSystem mx = generate_random_saddle({GeneratorKind::random_saddle, 30, 10, 10}, 2);
  const BlockDiagPrecond pw =
      make_ideal(build_augmented(mx.a(), mx.b(), WeightSelection::full(10)), mx.b());
  const SolveReport rw = solve_minres(mx, pw, random_vector(40, rng), 1e-10, 100);
  EXPECT_TRUE(rw.converged);
  EXPECT_LE(rw.iterations, 3);
}

TEST(Minres, MonotoneResidualAndBackstop) {
  const SaddleSystem sys = generate_random_saddle({GeneratorKind::random_saddle, 40, 12, 5}, 3);
  const BlockDiagPrecond p =
      make_diagonal(build_augmented(sys.a(), sys.b(), first_rows(5)), sys.b());
  std::mt19937_64 rng(92);
  const Vector b = random_vector(52, rng);
  const SolveReport r = solve_minres(sys, p, b, 1e-8, 500);
  ASSERT_TRUE(r.converged);
  ASSERT_EQ(r.relative_residuals.size(), static_cast<std::size_t>(r.iterations + 1));
  for (std::size_t i = 1; i < r.relative_residuals.size(); ++i)
    EXPECT_LE(r.relative_residuals[i], r.relative_residuals[i - 1] * (1 + 1e-12));
  Vector res = sys.apply(r.solution);
  axpy(-1.0, b, res);
  EXPECT_LE(norm2(res) / norm2(b), 10 * 1e-8);
}

TEST(Minres, IterationsBoundedByClusterCount) {
  std::mt19937_64 rng(93);
  for (Index k : {0, 2, 5, 8}) {
    const SaddleSystem sys = generate_random_saddle({GeneratorKind::random_saddle, 30, 8, k}, 10 + k);
    const BlockDiagPrecond p = make_ideal(build_augmented(sys.a(), sys.b(), first_rows(k)), sys.b());
    const int clusters = distinct_clusters(sys, p, 1e-8);
    const SolveReport r = solve_minres(sys, p, random_vector(38, rng), 1e-10, 100);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, clusters + 2) << "k=" << k;
  }
}

TEST(Minres, MaxIterationsReported) {
  const SaddleSystem sys = generate_random_saddle({GeneratorKind::random_saddle, 40, 12, 5}, 4);
  std::mt19937_64 rng(94);
  const SolveReport r = minres([&](std::span<const double> x) { return sys.apply(x); },
                               identity_op(), random_vector(52, rng), 1e-12, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.status, SolveStatus::max_iterations);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Pcg, Examples) {
  const SparseMatrix eye = SparseMatrix::identity(5);
  std::mt19937_64 rng(95);
  const Vector b = random_vector(5, rng);
  EXPECT_EQ(pcg(op_of(eye), identity_op(), b, 1e-12, 10).iterations, 1);

  const SparseMatrix d = SparseMatrix::diagonal(Vector{1, 4, 9, 16, 25});
  const LinearOperator jacobi = [&](std::span<const double> x) {
    Vector y(x.begin(), x.end());
    for (Index i = 0; i < 5; ++i) y[i] /= d.coeff(i, i);
    return y;
  };
  const SolveReport r = pcg(op_of(d), jacobi, b, 1e-12, 10);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);

  const SparseMatrix indef = SparseMatrix::diagonal(Vector{1, -1});
  EXPECT_THROW(pcg(op_of(indef), identity_op(), Vector{1, 1}, 1e-12, 10), IndefiniteOperator);
}

TEST(Pcg, BlockJacobiMatchesReferenceIterationCount) {
  const SaddleSystem sys = generate_banded_geo({GeneratorKind::banded_geo, 120, 48, 48, 3}, 3);
  const AugmentedBlock blk = build_augmented(sys.a(), sys.b(), WeightSelection::full(48));
  const Eigen::MatrixXd ak = to_eigen(blk.ak);
  Eigen::MatrixXd minv = Eigen::MatrixXd::Zero(120, 120);
  minv.topLeftCorner(48, 48) = ak.topLeftCorner(48, 48).inverse();
  minv.bottomRightCorner(72, 72) = ak.bottomRightCorner(72, 72).inverse();
  std::mt19937_64 rng(96);
  const Vector b = random_vector(120, rng);
  const int ref = reference_pcg(ak, minv, to_eigen(b), 1e-6);
  ASSERT_GT(ref, 0);
  const LinearOperator prec = [&](std::span<const double> x) {
    return from_eigen_vec(minv * to_eigen(Vector(x.begin(), x.end())));
  };
  const SolveReport r = pcg(op_of(blk.ak), prec, b, 1e-6, 1000);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.iterations, 0.5 * ref);
  EXPECT_LE(r.iterations, 1.5 * ref);
}

TEST(Fgmres, Examples) {
  const SaddleSystem sys = generate_random_saddle({GeneratorKind::random_saddle, 20, 6, 2}, 5);
  const Eigen::MatrixXd kinv = to_eigen(sys.assemble_dense()).inverse();
  const LinearOperator k = [&](std::span<const double> x) { return sys.apply(x); };
  const LinearOperator exact = [&](std::span<const double> x) {
    return from_eigen_vec(kinv * to_eigen(Vector(x.begin(), x.end())));
  };
  std::mt19937_64 rng(97);
  const SolveReport r = fgmres(k, exact, random_vector(26, rng), 1e-10, 30, 100);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  const SolveReport z = fgmres(k, exact, Vector(26, 0.0), 1e-10, 30, 100);
  EXPECT_EQ(z.iterations, 0);
  EXPECT_EQ(z.solution, Vector(26, 0.0));
}

TEST(Fgmres, RestartStillConverges) {
  const SaddleSystem sys = generate_random_saddle({GeneratorKind::random_saddle, 40, 12, 5}, 6);
  const BlockDiagPrecond p =
      make_diagonal(build_augmented(sys.a(), sys.b(), first_rows(5)), sys.b());
  std::mt19937_64 rng(98);
  const Vector b = random_vector(52, rng);
  const SolveReport r = solve_fgmres(sys, p, b, 1e-8, 5, 2000);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.true_relative_residual, 10 * 1e-8);
}

TEST(Fgmres, CgBfbtTracksAkinvBfbt) {
  // half of the field unobserved, as in a regularized inverse problem
  const SaddleSystem sys = generate_banded_geo({GeneratorKind::banded_geo, 120, 48, 24, 3}, 4);
  const AugmentedBlock blk = build_augmented(sys.a(), sys.b(), WeightSelection::full(48));
  const auto bfbt = bfbt_operator(sys.a(), sys.b(), blk.selection);
  LeadingSpec cg{LeadingKind::inner_cg};
  cg.cg.split = 48;
  std::mt19937_64 rng(99);
  const Vector b = random_vector(168, rng);
  const SolveReport ref = solve_minres(sys, make_with_schur(blk, {LeadingKind::exact}, bfbt), b,
                                       1e-8, 500);
  const SolveReport flex = solve_fgmres(sys, make_with_schur(blk, cg, bfbt), b, 1e-8, 30, 500);
  ASSERT_TRUE(ref.converged);
  ASSERT_TRUE(flex.converged);
  EXPECT_LE(flex.iterations, 2 * ref.iterations);
}
