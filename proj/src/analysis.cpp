#include "augprec/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "augprec/errors.hpp"
#include "augprec/schur.hpp"

namespace augprec {

namespace {

DenseMatrix spd_inverse(const DenseMatrix& m) {
  const CholeskyFactor f = dense_cholesky(m);
  DenseMatrix inv(m.rows(), m.cols());
  Vector e(static_cast<std::size_t>(m.rows()), 0.0);
  for (Index j = 0; j < m.rows(); ++j) {
    e[j] = 1.0;
    inv.set_column(j, f.solve(e));
    e[j] = 0.0;
  }
  return symmetrize(inv);
}

double rel_diff(const DenseMatrix& x, const DenseMatrix& y) {
  const double scale = std::max(frobenius_norm(x), frobenius_norm(y));
  return scale == 0.0 ? 0.0 : frobenius_norm(add(x, y, 1.0, -1.0)) / scale;
}

TheoremVerdict verdict(VerdictName name, double deviation, double tol, std::string details) {
  TheoremVerdict v;
  v.name = name;
  v.max_deviation = deviation;
  v.tolerance = tol;
  v.passed = deviation <= tol;
  v.details = std::move(details);
  return v;
}

TheoremVerdict inapplicable(VerdictName name, std::string why) {
  TheoremVerdict v;
  v.name = name;
  v.applicable = false;
  v.passed = false;
  v.max_deviation = std::numeric_limits<double>::quiet_NaN();
  v.details = std::move(why);
  return v;
}

struct ExpectedCluster {
  double center;
  Index multiplicity;
};

// Assigns every eigenvalue to its nearest expected center. Fails when a
// multiplicity differs, regardless of the deviation.
TheoremVerdict check_clusters(VerdictName name, const Vector& eigs,
                              const std::vector<ExpectedCluster>& expected, double tol) {
  std::vector<Index> counts(expected.size(), 0);
  double dev = 0.0;
  for (double lam : eigs) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < expected.size(); ++c)
      if (std::abs(lam - expected[c].center) < std::abs(lam - expected[best].center)) best = c;
    ++counts[best];
    dev = std::max(dev, std::abs(lam - expected[best].center));
  }
  std::ostringstream os;
  bool counts_ok = true;
  for (std::size_t c = 0; c < expected.size(); ++c) {
    os << expected[c].center << ":" << counts[c] << "/" << expected[c].multiplicity << " ";
    if (counts[c] != expected[c].multiplicity) counts_ok = false;
  }
  TheoremVerdict v = verdict(name, dev, tol, os.str());
  if (!counts_ok) {
    v.passed = false;
    v.details += "(multiplicity mismatch)";
  }
  return v;
}

DenseMatrix dense_k_inverse(const SaddleSystem& sys) { return inverse(sys.assemble_dense()); }

}  // namespace

SpectrumReport cluster_spectrum(Vector eigenvalues, double tol) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  SpectrumReport rep;
  rep.cluster_tol = tol;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= eigenvalues.size(); ++i) {
    if (i == eigenvalues.size() || eigenvalues[i] - eigenvalues[i - 1] > tol) {
      double sum = 0.0;
      for (std::size_t j = start; j < i; ++j) sum += eigenvalues[j];
      rep.clusters.push_back({sum / static_cast<double>(i - start),
                              static_cast<Index>(i - start)});
      start = i;
    }
  }
  rep.eigenvalues = std::move(eigenvalues);
  return rep;
}

DenseMatrix materialize_inverse(const BlockDiagPrecond& p) {
  if (p.flexible()) throw InvalidArgument("cannot materialize a flexible preconditioner");
  const Index dim = p.n() + p.m();
  DenseMatrix minv(dim, dim);
  Vector e(static_cast<std::size_t>(dim), 0.0);
  for (Index j = 0; j < dim; ++j) {
    e[j] = 1.0;
    minv.set_column(j, p.apply_inverse(std::span<const double>(e)));
    e[j] = 0.0;
  }
  return symmetrize(minv);
}

SpectrumReport preconditioned_spectrum(const SaddleSystem& sys, const BlockDiagPrecond& p,
                                       double cluster_tol) {
  const DenseMatrix minv = materialize_inverse(p);
  const DenseMatrix l = dense_cholesky(minv).dense_lower();
  const DenseMatrix k = sys.assemble_dense();
  const DenseMatrix c = symmetrize(multiply(transpose(l), multiply(k, l)));
  return cluster_spectrum(sym_eigenvalues(c), cluster_tol);
}

SpectrumReport ideal_spectrum(const SaddleSystem& sys, const WeightSelection& sel,
                              double cluster_tol) {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = sys.n(), m = sys.m();
  auto widen = [](const DenseMatrix& d) {
    Mat out(d.rows(), d.cols());
    for (Index i = 0; i < d.rows(); ++i)
      for (Index j = 0; j < d.cols(); ++j) out(i, j) = d(i, j);
    return out;
  };
  const Mat a = widen(sys.a().to_dense());
  const Mat b = widen(sys.b().to_dense());
  Mat ak = a;
  if (sel.kind == AugmentationKind::identity) {
    ak += static_cast<long double>(sel.rho) * Mat::Identity(n, n);
  } else {
    const Vector w = sel.weights(m);
    Mat wd = Mat::Zero(m, m);
    for (Index i = 0; i < m; ++i) wd(i, i) = w[i];
    ak += b.transpose() * wd * b;
  }
  const Eigen::LLT<Mat> la(ak);
  if (la.info() != Eigen::Success) throw NotPositiveDefinite("ideal_spectrum: A_k");
  const Mat x = la.solve(Mat(b.transpose()));
  Mat s = b * x;
  s = (0.5L * (s + s.transpose())).eval();
  const Eigen::LLT<Mat> ls(s);
  if (ls.info() != Eigen::Success) throw NotPositiveDefinite("ideal_spectrum: S_k");

  // C = R^{-1} K R^{-T} with blkdiag(A_k, S_k) = R R^T
  const Mat lainv = la.matrixL().solve(Mat::Identity(n, n));
  const Mat lsinv = ls.matrixL().solve(Mat::Identity(m, m));
  const Mat c11 = lainv * a * lainv.transpose();
  const Mat c21 = lsinv * b * lainv.transpose();
  DenseMatrix c(n + m, n + m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      c(i, j) = static_cast<double>(0.5L * (c11(i, j) + c11(j, i)));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      c(n + i, j) = static_cast<double>(c21(i, j));
      c(j, n + i) = c(n + i, j);
    }
  return cluster_spectrum(sym_eigenvalues(c), cluster_tol);
}

const char* to_string(VerdictName v) {
  switch (v) {
    case VerdictName::four_eig: return "four_eig";
    case VerdictName::two_eig: return "two_eig";
    case VerdictName::interval_bounds: return "interval_bounds";
    case VerdictName::mrd_schur: return "mrd_schur";
    case VerdictName::kw_identity: return "kw_identity";
    case VerdictName::projector: return "projector";
    case VerdictName::wishlist: return "wishlist";
    case VerdictName::commute: return "commute";
    case VerdictName::additive_schur: return "additive_schur";
    case VerdictName::lower_bound: return "lower_bound";
  }
  return "?";
}

TheoremVerdict verify_four_eig(const SaddleSystem& sys, const WeightSelection& sel) {
  const WellPosedReport wp = check_wellposed(sys);
  if (!wp.ok()) return inapplicable(VerdictName::four_eig, "saddle-point matrix singular");
  if (sel.kind == AugmentationKind::identity || sel.rank() != wp.nullity_a)
    return inapplicable(VerdictName::four_eig,
                        "rank(W_k) = " + std::to_string(sel.rank()) +
                            " differs from nullity(A) = " + std::to_string(wp.nullity_a));
  SpectrumReport spec;
  try {
    spec = ideal_spectrum(sys, sel);
  } catch (const NotPositiveDefinite& e) {
    return inapplicable(VerdictName::four_eig, std::string("A_k not SPD: ") + e.what());
  }
  const Index n = sys.n(), m = sys.m(), k = wp.nullity_a;
  return check_clusters(VerdictName::four_eig, spec.eigenvalues,
                        {{-1.0, k}, {1.0, n - m + k}, {kGoldenMinus, m - k}, {kGoldenPlus, m - k}},
                        1e-8);
}

TheoremVerdict verify_two_eig(const SaddleSystem& sys) {
  const WellPosedReport wp = check_wellposed(sys);
  if (!wp.ok() || wp.nullity_a != sys.m())
    return inapplicable(VerdictName::two_eig, "needs nullity(A) = m");
  const SpectrumReport spec = ideal_spectrum(sys, WeightSelection::full(sys.m()));
  return check_clusters(VerdictName::two_eig, spec.eigenvalues,
                        {{-1.0, sys.m()}, {1.0, sys.n()}}, 1e-9);
}

TheoremVerdict verify_interval_bounds(const SaddleSystem& sys, const WeightSelection& sel) {
  SpectrumReport spec;
  try {
    spec = ideal_spectrum(sys, sel);
  } catch (const NotPositiveDefinite& e) {
    return inapplicable(VerdictName::interval_bounds,
                        std::string("A + B^T W B not SPD: ") + e.what());
  }
  double dev = 0.0;
  for (double lam : spec.eigenvalues) {
    double d;
    if (lam < 0.0)
      d = std::max({0.0, -1.0 - lam, lam - kGoldenMinus});
    else
      d = std::max({0.0, 1.0 - lam, lam - kGoldenPlus});
    dev = std::max(dev, d);
  }
  return verdict(VerdictName::interval_bounds, dev, 1e-10,
                 std::to_string(spec.clusters.size()) + " clusters");
}

std::vector<TheoremVerdict> verify_identities(const SaddleSystem& sys,
                                              const WeightSelection& sel) {
  std::vector<TheoremVerdict> out;
  const WellPosedReport wp = check_wellposed(sys);
  const Index n = sys.n(), m = sys.m(), k = wp.nullity_a;
  if (!wp.ok()) {
    for (auto name : {VerdictName::kw_identity, VerdictName::mrd_schur, VerdictName::projector,
                      VerdictName::wishlist, VerdictName::commute, VerdictName::additive_schur})
      out.push_back(inapplicable(name, "saddle-point matrix singular"));
    return out;
  }

  const DenseMatrix a = sys.a().to_dense();
  const DenseMatrix b = sys.b().to_dense();
  const Vector wdiag = sel.weights(m);
  const bool identity_kind = sel.kind == AugmentationKind::identity;

  std::optional<AugmentedBlock> blk;
  try {
    blk = build_augmented(sys.a(), sys.b(), sel);
  } catch (const NotPositiveDefinite&) {
  }

  // K^{-1} = K(W)^{-1} + blkdiag(0, W)
  if (identity_kind) {
    out.push_back(inapplicable(VerdictName::kw_identity, "needs a weight matrix W"));
  } else {
    const SaddleSystem kw(add(sys.a(), triple_product(sys.b(), sel.rows)), sys.b());
    DenseMatrix rhs = dense_k_inverse(kw);
    for (Index i = 0; i < m; ++i) rhs(n + i, n + i) += wdiag[i];
    out.push_back(verdict(VerdictName::kw_identity, rel_diff(dense_k_inverse(sys), rhs), 1e-9,
                          "K^{-1} vs K(W)^{-1} + blkdiag(0, W)"));
  }

  const bool maximal = k == m && sel.rank() == m && !identity_kind && blk;
  const bool minimal_rank = sel.rank() == k && !identity_kind && blk;

  DenseMatrix ak_inv;
  if (blk) ak_inv = spd_inverse(blk->ak.to_dense());

  // B A_W^{-1} B^T = W^{-1}
  if (maximal) {
    const DenseMatrix s = multiply(b, multiply(ak_inv, transpose(b)));
    DenseMatrix winv(m, m);
    for (Index i = 0; i < m; ++i) winv(i, i) = 1.0 / wdiag[i];
    out.push_back(verdict(VerdictName::mrd_schur, rel_diff(s, winv), 1e-9,
                          "B A_W^{-1} B^T vs W^{-1}"));
  } else {
    out.push_back(inapplicable(VerdictName::mrd_schur, "needs nullity(A) = m and W invertible"));
  }

  // A_k^{-1} A is a projector and A (A+G)^{-1} G = 0
  if (minimal_rank) {
    const DenseMatrix p = multiply(ak_inv, a);
    const double d1 = rel_diff(multiply(p, p), p);
    const DenseMatrix g = triple_product(sys.b(), sel.rows).to_dense();
    const DenseMatrix prod = multiply(a, multiply(ak_inv, g));
    const double scale = frobenius_norm(a) * frobenius_norm(multiply(ak_inv, g));
    const double d2 = scale == 0.0 ? 0.0 : frobenius_norm(prod) / scale;
    out.push_back(verdict(VerdictName::projector, std::max(d1, d2), 1e-9,
                          "idempotence " + std::to_string(d1) + ", A(A+G)^{-1}G " +
                              std::to_string(d2)));
  } else {
    out.push_back(inapplicable(VerdictName::projector, "needs rank(W_k) = nullity(A)"));
  }

  // Split operator blocks in the maximal-nullity case. The split uses the
  // Cholesky factor of A_W instead of its square root; both give the same
  // spectra and singular values.
  if (maximal) {
    DenseMatrix linv(n, n);
    Vector e(static_cast<std::size_t>(n), 0.0);
    for (Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      linv.set_column(j, blk->factor->forward(e));
      e[j] = 0.0;
    }
    const DenseMatrix at = symmetrize(multiply(linv, multiply(a, transpose(linv))));
    DenseMatrix bt = multiply(b, transpose(linv));
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) bt(i, j) *= std::sqrt(wdiag[i]);
    const Vector eig = sym_eigenvalues(at);
    double d1 = 0.0;
    Index ones = 0;
    for (double lam : eig) {
      d1 = std::max(d1, std::min(std::abs(lam), std::abs(lam - 1.0)));
      if (std::abs(lam - 1.0) < 0.5) ++ones;
    }
    if (ones != n - m) d1 = std::numeric_limits<double>::infinity();
    double d2 = 0.0;
    for (double s : singular_values(bt)) d2 = std::max(d2, std::abs(s - 1.0));
    const double d3 = frobenius_norm(multiply(at, transpose(bt))) /
                      std::max(frobenius_norm(at) * frobenius_norm(bt), 1e-300);
    out.push_back(verdict(VerdictName::wishlist, std::max({d1, d2, d3}), 1e-9,
                          "eig(A~) " + std::to_string(d1) + ", sv(B~) " +
                              std::to_string(d2) + ", A~B~^T " + std::to_string(d3)));
  } else {
    out.push_back(inapplicable(VerdictName::wishlist, "needs nullity(A) = m and W invertible"));
  }

  // VA projector and commutation with A_k^{-1} A
  if (minimal_rank && m < n) {
    try {
      const NullspaceBasis basis = nullspace_basis(sys.b());
      const DenseMatrix& z = basis.z;
      const DenseMatrix reduced = symmetrize(multiply(transpose(z), multiply(a, z)));
      const DenseMatrix v = multiply(z, multiply(spd_inverse(reduced), transpose(z)));
      const DenseMatrix va = multiply(v, a);
      const DenseMatrix p = multiply(ak_inv, a);
      const double d1 = rel_diff(multiply(va, va), va);
      const double d2 = rel_diff(multiply(p, va), multiply(va, p));
      out.push_back(verdict(VerdictName::commute, std::max(d1, d2), 1e-9,
                            "VA idempotence " + std::to_string(d1) + ", commutator " +
                                std::to_string(d2)));

      const DenseMatrix additive = schur_inverse_additive(sys.a(), sys.b(), sel, basis);
      const DenseMatrix direct = spd_inverse(schur_matrix(*blk, sys.b()));
      out.push_back(verdict(VerdictName::additive_schur, rel_diff(additive, direct), 1e-8,
                            "additive formula vs inverse of B A_k^{-1} B^T"));
    } catch (const Error& e) {
      out.push_back(inapplicable(VerdictName::commute, e.what()));
      out.push_back(inapplicable(VerdictName::additive_schur, e.what()));
    }
  } else {
    out.push_back(inapplicable(VerdictName::commute, "needs rank(W_k) = nullity(A)"));
    out.push_back(inapplicable(VerdictName::additive_schur, "needs rank(W_k) = nullity(A)"));
  }
  return out;
}

TheoremVerdict verify_lower_bound(const SaddleSystem& sys) {
  const WellPosedReport wp = check_wellposed(sys);
  const Index n = sys.n(), m = sys.m();
  if (!wp.ok() || wp.nullity_a != m)
    return inapplicable(VerdictName::lower_bound, "needs rank(A) = n - m");

  const DenseMatrix a = sys.a().to_dense();
  const SymEigen ea = sym_eigen(a);
  const double amax = std::max(std::abs(ea.values.front()), std::abs(ea.values.back()));
  const double zero_tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * amax;

  // Eigenvectors of the n - m largest eigenvalues span range(A).
  DenseMatrix ua(n, n - m);
  for (Index j = 0; j < n - m; ++j) ua.set_column(j, ea.vectors.column(m + j));
  double mu_min = std::numeric_limits<double>::infinity();
  for (double lam : ea.values)
    if (lam > zero_tol) mu_min = std::min(mu_min, lam);

  const DenseMatrix bt = transpose(sys.b().to_dense());
  const Svd sb = svd(bt);
  const double sigma_min = sb.s.back();
  const Vector cosines = singular_values(multiply(transpose(ua), sb.u));
  const double cos_min = cosines.empty() ? 0.0 : std::min(1.0, cosines.front());

  const double bound = std::min(mu_min * (1.0 - cos_min), sigma_min * std::sqrt(1.0 - cos_min));
  const Vector ek = sym_eigenvalues(sys.assemble_dense());
  double min_pos = std::numeric_limits<double>::infinity();
  for (double lam : ek)
    if (lam > 0.0) min_pos = std::min(min_pos, lam);

  return verdict(VerdictName::lower_bound, std::max(0.0, bound - min_pos), 1e-10,
                 "bound " + std::to_string(bound) + ", min positive eigenvalue " +
                                 std::to_string(min_pos) + ", cos(theta_min) " +
                     std::to_string(cos_min));
}

}  // namespace augprec
