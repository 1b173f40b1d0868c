#pragma once

#include <string>
#include <vector>

#include "augprec/augmentation.hpp"
#include "augprec/precond.hpp"
#include "augprec/saddle_system.hpp"
#include "augprec/sym_eigen.hpp"

namespace augprec {

struct Cluster {
  double center = 0.0;
  Index multiplicity = 0;
};

struct SpectrumReport {
  Vector eigenvalues;  // ascending
  std::vector<Cluster> clusters;
  double cluster_tol = 1e-8;
};

inline const double kGoldenPlus = (1.0 + std::sqrt(5.0)) / 2.0;
inline const double kGoldenMinus = (1.0 - std::sqrt(5.0)) / 2.0;

// Single-linkage clustering of sorted eigenvalues: a gap larger than tol
// starts a new cluster. Centers are cluster means.
SpectrumReport cluster_spectrum(Vector eigenvalues, double tol);

// Dense M^{-1} obtained by applying the preconditioner to unit vectors.
DenseMatrix materialize_inverse(const BlockDiagPrecond& p);

// Spectrum of M^{-1} K via the congruent symmetric matrix L^T K L with
// M^{-1} = L L^T. Requires a fixed (non-flexible) preconditioner.
SpectrumReport preconditioned_spectrum(const SaddleSystem& sys, const BlockDiagPrecond& p,
                                       double cluster_tol = 1e-8);

// Spectrum of the ideal diag(A_k, S_k) preconditioned K. The congruence with
// the block Cholesky factor is formed in extended precision, so eigenvalues
// are not limited by cond(A_k) * eps. Throws NotPositiveDefinite.
SpectrumReport ideal_spectrum(const SaddleSystem& sys, const WeightSelection& sel,
                              double cluster_tol = 1e-8);

enum class VerdictName {
  four_eig,
  two_eig,
  interval_bounds,
  mrd_schur,
  kw_identity,
  projector,
  wishlist,
  commute,
  additive_schur,
  lower_bound,
};

const char* to_string(VerdictName v);

struct TheoremVerdict {
  VerdictName name = VerdictName::four_eig;
  bool applicable = true;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string details;
};

// Ideal M_k spectrum against {-1: k, 1: n-m+k, (1 +- sqrt5)/2: m-k each}.
// Inapplicable unless rank(W_k) equals nullity(A).
TheoremVerdict verify_four_eig(const SaddleSystem& sys, const WeightSelection& sel);

// Maximal nullity with W = I: spectrum {-1: m, 1: n} within 1e-9.
TheoremVerdict verify_two_eig(const SaddleSystem& sys);

// Eigenvalues of M_2^{-1} K within [-1, (1-sqrt5)/2] U [1, (1+sqrt5)/2].
TheoremVerdict verify_interval_bounds(const SaddleSystem& sys, const WeightSelection& sel);

// kw_identity, mrd_schur, projector, wishlist, commute, additive_schur, each
// marked inapplicable when its precondition fails.
std::vector<TheoremVerdict> verify_identities(const SaddleSystem& sys,
                                              const WeightSelection& sel);

// Positive eigenvalues of K against the principal-angle lower bound
// (maximal nullity only).
TheoremVerdict verify_lower_bound(const SaddleSystem& sys);

}  // namespace augprec
