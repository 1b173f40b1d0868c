#include "augprec/generators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augprec/dense_matrix.hpp"
#include "augprec/errors.hpp"

namespace augprec {

Rng derived_rng(std::uint64_t seed, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(attempt),
                    static_cast<std::uint32_t>(attempt >> 32)};
  return Rng(seq);
}

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::random_saddle: return "random-saddle";
    case GeneratorKind::sparse_saddle: return "sparse-saddle";
    case GeneratorKind::degenerate_lp: return "degenerate-lp";
    case GeneratorKind::banded_geo: return "banded-geo";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& s) {
  for (auto k : {GeneratorKind::random_saddle, GeneratorKind::sparse_saddle,
                 GeneratorKind::degenerate_lp, GeneratorKind::banded_geo})
    if (s == to_string(k)) return k;
  throw InvalidArgument("unknown generator kind '" + s + "'");
}

void GeneratorSpec::validate() const {
  if (!(0 <= k && k <= m && 0 < m && m < n))
    throw InvalidArgument("generator spec needs 0 <= k <= m < n, got n=" + std::to_string(n) +
                          " m=" + std::to_string(m) + " k=" + std::to_string(k));
  if (kind == GeneratorKind::banded_geo && !(bandwidth >= 1 && bandwidth < n - m && bandwidth < m))
    throw InvalidArgument("banded-geo needs 1 <= bandwidth < min(m, n - m)");
  if ((kind == GeneratorKind::sparse_saddle || kind == GeneratorKind::degenerate_lp) &&
      !(density > 0.0 && density <= 1.0))
    throw InvalidArgument("density must lie in (0, 1]");
}

namespace {

std::vector<Index> shuffled(Index n, Rng& rng) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

bool acceptable(const SaddleSystem& sys, Index k) {
  const WellPosedReport r = check_wellposed(sys);
  return r.ok() && r.nullity_a == k;
}

// Sparse m x n Gaussian matrix in which every row and column holds at least
// one entry.
SparseMatrix sparse_gaussian(Index m, Index n, double density, Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  std::vector<Triplet> t;
  std::vector<char> row_hit(static_cast<std::size_t>(m)), col_hit(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      if (unif(rng) < density) {
        t.push_back({i, j, normal(rng)});
        row_hit[i] = col_hit[j] = 1;
      }
  std::uniform_int_distribution<Index> pick_col(0, n - 1), pick_row(0, m - 1);
  for (Index i = 0; i < m; ++i)
    if (!row_hit[i]) t.push_back({i, pick_col(rng), 1.0 + std::abs(normal(rng))});
  for (Index j = 0; j < n; ++j)
    if (!col_hit[j]) t.push_back({pick_row(rng), j, 1.0 + std::abs(normal(rng))});
  return SparseMatrix::from_triplets(m, n, t);
}

}  // namespace

SaddleSystem generate_random_saddle(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Index n = spec.n, m = spec.m;
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));

    Eigen::MatrixXd g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) g(i, j) = normal(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();

    Eigen::VectorXd d(n);
    const std::vector<Index> perm = shuffled(n, rng);
    for (Index i = 0; i < n; ++i) d(perm[i]) = i < spec.k ? 0.0 : std::exp(logu(rng));
    const Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();

    DenseMatrix ad(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) ad(i, j) = 0.5 * (a(i, j) + a(j, i));
    DenseMatrix bd(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) bd(i, j) = normal(rng);

    SaddleSystem sys(SparseMatrix::from_dense(ad), SparseMatrix::from_dense(bd));
    if (acceptable(sys, spec.k)) return sys;
  }
  throw GenerationFailure("random-saddle: no well-posed draw after " +
                          std::to_string(kGeneratorRetries) + " attempts");
}

SaddleSystem generate_sparse_saddle(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Index n = spec.n, m = spec.m;
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> unif;
    const std::vector<Index> perm = shuffled(n, rng);
    std::vector<char> null(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < spec.k; ++i) null[perm[i]] = 1;

    // Symmetric, strictly diagonally dominant on the non-null coordinates.
    std::vector<Triplet> t;
    Vector rowsum(static_cast<std::size_t>(n), 0.0);
    const double offdensity = std::min(1.0, 2.0 / n);
    for (Index i = 0; i < n; ++i) {
      if (null[i]) continue;
      for (Index j = i + 1; j < n; ++j) {
        if (null[j] || unif(rng) >= offdensity) continue;
        const double v = 2.0 * unif(rng) - 1.0;
        t.push_back({i, j, v});
        t.push_back({j, i, v});
        rowsum[i] += std::abs(v);
        rowsum[j] += std::abs(v);
      }
    }
    for (Index i = 0; i < n; ++i)
      if (!null[i]) t.push_back({i, i, rowsum[i] + 0.1 + unif(rng)});

    SaddleSystem sys(SparseMatrix::from_triplets(n, n, t),
                     sparse_gaussian(m, n, spec.density, rng));
    if (acceptable(sys, spec.k)) return sys;
  }
  throw GenerationFailure("sparse-saddle: no well-posed draw after " +
                          std::to_string(kGeneratorRetries) + " attempts");
}

SaddleSystem generate_banded_geo(const GeneratorSpec& spec, std::uint64_t seed) {
  GeneratorSpec s = spec;
  s.kind = GeneratorKind::banded_geo;
  s.validate();
  const Index n = s.n, m = s.m, p = n - m, bw = s.bandwidth;
  const Index h = bw / 2;  // half-bandwidth of T, so T T^T stays within bw
  constexpr double kBeta = 1e-3;
  Rng rng = derived_rng(seed, 0);
  std::uniform_real_distribution<double> unif;

  std::vector<Triplet> bt;
  for (Index i = 0; i < m; ++i) {
    double off = 0.0;
    for (Index j = std::max<Index>(0, i - h); j <= std::min(m - 1, i + h); ++j) {
      if (j == i) continue;
      const double v = unif(rng) - 0.5;
      off += std::abs(v);
      bt.push_back({i, j, v});
    }
    bt.push_back({i, i, 1.0 + off + unif(rng)});
  }
  // Column j of G covers rows start(j) .. start(j) + bw.
  for (Index j = 0; j < p; ++j) {
    const Index start = p > 1 ? j * (m - 1 - bw) / (p - 1) : 0;
    for (Index r = start; r <= start + bw; ++r) bt.push_back({r, m + j, unif(rng) - 0.5});
  }

  std::vector<Triplet> at;
  const std::vector<Index> perm = shuffled(m, rng);
  std::vector<char> observed(static_cast<std::size_t>(m), 1);
  for (Index i = 0; i < s.k; ++i) observed[perm[i]] = 0;
  for (Index i = 0; i < m; ++i)
    if (observed[i]) at.push_back({i, i, 1.0});
  // beta (I + D^T D), D the first-difference operator on the model block
  for (Index j = 0; j < p; ++j) {
    const double deg = (j > 0) + (j + 1 < p);
    at.push_back({m + j, m + j, kBeta * (1.0 + deg)});
    if (j + 1 < p) {
      at.push_back({m + j, m + j + 1, -kBeta});
      at.push_back({m + j + 1, m + j, -kBeta});
    }
  }
  return SaddleSystem(SparseMatrix::from_triplets(n, n, at),
                      SparseMatrix::from_triplets(m, n, bt));
}

namespace {

struct PlantedLp {
  QpProblem prob;
  std::vector<Index> basis;
};

PlantedLp planted_lp(Index n, Index m, std::uint64_t seed, double density, const char* who) {
  if (!(0 < m && m < n)) throw InvalidArgument(std::string(who) + ": needs 0 < m < n");
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    std::vector<Index> perm = shuffled(n, rng);
    std::vector<Index> basis(perm.begin(), perm.begin() + m);

    std::vector<Triplet> t = sparse_gaussian(m, n, density, rng).triplets();
    for (Index r = 0; r < m; ++r) t.push_back({r, basis[r], 3.0});
    SparseMatrix j = SparseMatrix::from_triplets(m, n, t);

    DenseMatrix jd = j.to_dense();
    DenseMatrix js(m, m);
    for (Index r = 0; r < m; ++r)
      for (Index c = 0; c < m; ++c) js(r, c) = jd(r, basis[c]);
    if (numerical_rank(js) < m) continue;

    Vector xhat(static_cast<std::size_t>(n), 0.0), zhat(static_cast<std::size_t>(n), 0.0);
    std::vector<char> in_basis(static_cast<std::size_t>(n), 0);
    for (Index c : basis) in_basis[c] = 1;
    for (Index i = 0; i < n; ++i) (in_basis[i] ? xhat : zhat)[i] = unif(rng);
    Vector yhat(static_cast<std::size_t>(m));
    for (auto& v : yhat) v = normal(rng);

    PlantedLp lp;
    lp.prob.h = SparseMatrix(n, n);
    lp.prob.b = spmv(j, xhat);
    lp.prob.c = spmv_transpose(j, yhat);
    axpy(1.0, zhat, lp.prob.c);
    lp.prob.j = std::move(j);
    std::sort(basis.begin(), basis.end());
    lp.basis = std::move(basis);
    return lp;
  }
  throw GenerationFailure(std::string(who) + ": singular planted basis after " +
                          std::to_string(kGeneratorRetries) + " attempts");
}

}  // namespace

QpProblem generate_random_lp(Index n, Index m, std::uint64_t seed, double density) {
  return planted_lp(n, m, seed, density, "random-lp").prob;
}

QpProblem generate_degenerate_lp(const GeneratorSpec& spec, std::uint64_t seed) {
  GeneratorSpec s = spec;
  s.kind = GeneratorKind::degenerate_lp;
  s.validate();
  if (s.k == 0) throw InvalidArgument("degenerate-lp needs k >= 1 duplicated columns");
  const Index base = s.n - s.k;
  if (base <= s.m) throw InvalidArgument("degenerate-lp needs n - k > m");
  PlantedLp lp = planted_lp(base, s.m, seed, s.density, "degenerate-lp");

  std::vector<Triplet> t = lp.prob.j.triplets();
  Vector c = lp.prob.c;
  for (Index d = 0; d < s.k; ++d) {
    const Index src = lp.basis[d];
    for (const Triplet& e : lp.prob.j.triplets())
      if (e.col == src) t.push_back({e.row, base + d, e.value});
    c.push_back(lp.prob.c[src]);
  }
  QpProblem out;
  out.h = SparseMatrix(s.n, s.n);
  out.j = SparseMatrix::from_triplets(s.m, s.n, t);
  out.b = lp.prob.b;
  out.c = std::move(c);
  return out;
}

QpProblem generate_random_qp(Index n, Index m, std::uint64_t seed, double density) {
  QpProblem qp = planted_lp(n, m, seed, density, "random-qp").prob;
  // H = F^T F with F sparse of rank about n/2
  Rng rng = derived_rng(seed, 1000);
  const SparseMatrix f = sparse_gaussian(n / 2, n, std::min(1.0, 3.0 / n), rng);
  qp.h = multiply(transpose(f), f);
  return qp;
}

}  // namespace augprec
