#include <gtest/gtest.h>

#include "augprec/errors.hpp"
#include "augprec/generators.hpp"
#include "augprec/ipm.hpp"
#include "test_util.hpp"

using namespace augprec;
using namespace testutil;

namespace {

QpProblem trivial_lp() {
  QpProblem p;
  p.h = SparseMatrix(1, 1);
  p.j = SparseMatrix::identity(1);
  p.b = {1.0};
  p.c = {1.0};
  return p;
}

IpmOptions with_inner(InnerSolver s) {
  IpmOptions o;
  o.inner = s;
  return o;
}

}  // namespace

TEST(BuildKkt, Examples) {
  QpProblem p;
  p.h = SparseMatrix(2, 2);
  p.j = SparseMatrix::from_dense(DenseMatrix(1, 2, Vector{1, 1}));
  p.b = {1};
  p.c = {1, 1};
  IpmState s;
  s.x = {1, 1};
  s.z = {1, 1};
  s.y = {0};
  EXPECT_EQ(build_kkt(p, s).a(), SparseMatrix::identity(2));
  s.x = {1, 2};
  s.z = {2, 2};
  EXPECT_EQ(build_kkt(p, s).a(), SparseMatrix::diagonal(Vector{2, 1}));
  s.x = {1, 0};
  EXPECT_THROW(build_kkt(p, s), InvalidArgument);
}

TEST(BuildKkt, RandomQpMatchesDense) {
  const QpProblem qp = generate_random_qp(30, 10, 4);
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  IpmState s;
  for (int i = 0; i < 30; ++i) {
    s.x.push_back(u(rng));
    s.z.push_back(u(rng));
  }
  s.y.assign(10, 0.0);
  const SaddleSystem sys = build_kkt(qp, s);
  Eigen::MatrixXd ref = to_eigen(qp.h);
  for (int i = 0; i < 30; ++i) ref(i, i) += s.z[i] / s.x[i];
  EXPECT_LE((to_eigen(sys.a()) - ref).cwiseAbs().maxCoeff(), 1e-14 * ref.cwiseAbs().maxCoeff());
  EXPECT_TRUE(check_wellposed(sys).b_full_rank);
}

TEST(DetectSingular, Examples) {
  EXPECT_FALSE(detect_singular_leading(SparseMatrix::identity(3)));
  EXPECT_TRUE(detect_singular_leading(SparseMatrix::diagonal(Vector{1, 1e-18})));
  // non-diagonal path: e e^T + tiny shift is numerically singular
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(3, 3, 1.0);
  EXPECT_TRUE(detect_singular_leading(SparseMatrix::from_dense(from_eigen(m))));
  m += Eigen::MatrixXd::Identity(3, 3);
  EXPECT_FALSE(detect_singular_leading(SparseMatrix::from_dense(from_eigen(m))));
}

TEST(Mehrotra, TrivialLp) {
  for (auto inner : {InnerSolver::direct, InnerSolver::minres}) {
    const IpmResult r = mehrotra_solve(trivial_lp(), with_inner(inner));
    ASSERT_EQ(r.status, IpmStatus::converged);
    EXPECT_NEAR(r.state.x[0], 1.0, 1e-6);
    EXPECT_LE(r.state.x[0] * r.state.z[0], 1e-6);
  }
}

TEST(Mehrotra, RandomLpDirectVsMinres) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const QpProblem lp = generate_random_lp(60, 20, seed);
    const IpmResult d = mehrotra_solve(lp, with_inner(InnerSolver::direct));
    const IpmResult m = mehrotra_solve(lp, with_inner(InnerSolver::minres));
    ASSERT_EQ(d.status, IpmStatus::converged) << seed;
    ASSERT_EQ(m.status, IpmStatus::converged) << seed;
    EXPECT_GE(m.iterations(), d.iterations()) << seed;
    EXPECT_LE(m.iterations(), 2 * d.iterations()) << seed;
    for (const auto& rec : m.trace.records) {
      ASSERT_TRUE(rec.predictor.has_value());
      ASSERT_TRUE(rec.corrector.has_value());
      EXPECT_FALSE(rec.inner_failure) << rec.failure;
    }
    // same optimum
    EXPECT_LE(rel_err(m.state.x, d.state.x), 1e-3) << seed;
  }
}

TEST(Mehrotra, InteriorAndGapWindow) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const IpmResult r = mehrotra_solve(generate_random_lp(60, 20, seed), {});
    ASSERT_EQ(r.status, IpmStatus::converged);
    const auto& recs = r.trace.records;
    for (const auto& rec : recs) {
      EXPECT_GT(rec.min_x, 0.0);
      EXPECT_GT(rec.min_z, 0.0);
      EXPECT_GE(rec.duality_gap, 0.0);
    }
    for (std::size_t i = 0; i + 3 < recs.size(); ++i)
      EXPECT_LE(recs[i + 3].duality_gap, recs[i].duality_gap) << "seed " << seed << " it " << i;
  }
}

TEST(Mehrotra, OneKktSystemPerIteration) {
  int calls = 0;
  const IpmResult r = mehrotra_solve(generate_random_lp(30, 10, 2), with_inner(InnerSolver::minres),
                                     [&](const SaddleSystem& sys, const IpmRecord&) {
                                       ++calls;
                                       EXPECT_TRUE(check_wellposed(sys).b_full_rank);
                                     });
  EXPECT_EQ(calls, r.iterations());
}

TEST(Mehrotra, DegenerateLpTurnsSingular) {
  const GeneratorSpec spec{GeneratorKind::degenerate_lp, 60, 20, 8, 3, 0.3};
  const QpProblem lp = generate_degenerate_lp(spec, 1);
  SparseMatrix last_a;
  const IpmResult r =
      mehrotra_solve(lp, with_inner(InnerSolver::minres),
                     [&](const SaddleSystem& sys, const IpmRecord&) { last_a = sys.a(); });
  ASSERT_EQ(r.status, IpmStatus::converged);
  const auto& recs = r.trace.records;
  EXPECT_FALSE(recs.front().leading_singular);
  EXPECT_TRUE(recs.back().leading_singular);
  EXPECT_EQ(recs.back().policy, PrecondPolicy::augmented_diagonal);
  // independent oracle on the last block
  const Eigen::MatrixXd a = to_eigen(last_a);
  const double min_eig = oracle_eigenvalues(a)(0);
  EXPECT_LT(min_eig, 60 * std::numeric_limits<double>::epsilon() * a.diagonal().maxCoeff());
}

TEST(Mehrotra, QpUsesIncompleteCholesky) {
  const QpProblem qp = generate_random_qp(40, 12, 5);
  const IpmResult d = mehrotra_solve(qp, with_inner(InnerSolver::direct));
  const IpmResult m = mehrotra_solve(qp, with_inner(InnerSolver::minres));
  ASSERT_EQ(d.status, IpmStatus::converged);
  ASSERT_EQ(m.status, IpmStatus::converged);
  EXPECT_EQ(m.trace.records.front().policy, PrecondPolicy::ic_diagonal);
}

TEST(Mehrotra, IterationLimit) {
  IpmOptions o;
  o.max_iterations = 2;
  const IpmResult r = mehrotra_solve(generate_random_lp(30, 10, 3), o);
  EXPECT_EQ(r.status, IpmStatus::iteration_limit);
  EXPECT_EQ(r.iterations(), 2);
}
