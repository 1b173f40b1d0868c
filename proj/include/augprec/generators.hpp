#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "augprec/ipm.hpp"
#include "augprec/saddle_system.hpp"

namespace augprec {

// Every generator draws from this engine; its name goes into CSV metadata.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

// Engine for attempt `attempt` of a generator seeded with `seed`.
Rng derived_rng(std::uint64_t seed, std::uint64_t attempt);

enum class GeneratorKind { random_saddle, sparse_saddle, degenerate_lp, banded_geo };

const char* to_string(GeneratorKind k);
GeneratorKind parse_generator_kind(const std::string& s);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::random_saddle;
  Index n = 0;
  Index m = 0;
  Index k = 0;  // nullity of A
  Index bandwidth = 3;  // banded_geo only
  double density = 0.2;  // sparse_saddle and LPs

  // Throws InvalidArgument unless k <= m < n (and the banded limits hold).
  void validate() const;
};

inline constexpr int kGeneratorRetries = 20;

// Dense A = Q diag(d) Q^T with exactly k zeros in d and the rest
// log-uniform in [0.1, 10]; Gaussian B. Redrawn until well posed with
// nullity(A) = k.
SaddleSystem generate_random_saddle(const GeneratorSpec& spec, std::uint64_t seed);

// Sparse A whose kernel is spanned by k coordinate vectors, sparse B with
// the given density. Gives the structural selection real work to do.
SaddleSystem generate_sparse_saddle(const GeneratorSpec& spec, std::uint64_t seed);

// B = [T G] with T (m x m) tridiagonal-ish and banded G so B B^T has
// half-bandwidth <= bandwidth; A = blkdiag(observation mask, beta (I + D^T D))
// with k unobserved rows.
SaddleSystem generate_banded_geo(const GeneratorSpec& spec, std::uint64_t seed = 0);

// LP with a planted nondegenerate optimal basis of size m.
QpProblem generate_random_lp(Index n, Index m, std::uint64_t seed, double density = 0.3);

// spec.n columns of which spec.k duplicate basic columns of a planted
// optimum, so the optimal face is not a vertex.
QpProblem generate_degenerate_lp(const GeneratorSpec& spec, std::uint64_t seed);

// Convex QP with a rank-deficient sparse H.
QpProblem generate_random_qp(Index n, Index m, std::uint64_t seed, double density = 0.3);

}  // namespace augprec
