#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "augprec/krylov.hpp"
#include "augprec/saddle_system.hpp"
#include "augprec/sparse_matrix.hpp"

namespace augprec {

// min c^T x + 1/2 x^T H x  s.t.  J x = b, x >= 0   (H = 0 for an LP)
struct QpProblem {
  SparseMatrix h;
  SparseMatrix j;
  Vector b;
  Vector c;

  Index n() const { return j.cols(); }
  Index m() const { return j.rows(); }
  bool is_lp() const { return h.nnz() == 0; }
};

struct IpmState {
  Vector x;  // > 0
  Vector y;
  Vector z;  // > 0
  double tau = 0.0;  // sigma * mu used by the last corrector
  Index iteration = 0;
};

enum class InnerSolver { direct, minres };

// Which preconditioner an iteration used for its inner MINRES solves.
enum class PrecondPolicy {
  direct,           // dense LU, no preconditioner
  ideal_diagonal,   // LP with nonsingular A: diag(A), B A^{-1} B^T
  ic_diagonal,      // QP with nonsingular A: IC(A), B diag(A)^{-1} B^T
  augmented_diagonal,  // singular A: partial augmentation + diagonal blocks
};

const char* to_string(PrecondPolicy p);

struct IpmRecord {
  Index iteration = 0;
  double duality_gap = 0.0;  // x^T z before the step
  double relative_gap = 0.0;
  double primal_residual = 0.0;  // ||Jx - b|| / (1 + ||b||)
  double dual_residual = 0.0;    // ||Hx + c - J^T y - z|| / (1 + ||c||)
  bool leading_singular = false;
  PrecondPolicy policy = PrecondPolicy::direct;
  Index rank_w = 0;
  std::optional<SolveReport> predictor;
  std::optional<SolveReport> corrector;
  bool inner_failure = false;
  std::string failure;
  double step_primal = 0.0;
  double step_dual = 0.0;
  double min_x = 0.0;  // after the step
  double min_z = 0.0;
};

struct IpmTrace {
  std::vector<IpmRecord> records;
};

struct IpmOptions {
  InnerSolver inner = InnerSolver::direct;
  double gap_tol = 1e-6;
  double feas_tol = 1e-6;
  double inner_tol = 1e-7;
  Index inner_maxit = 1000;
  Index max_iterations = 100;
  double ic_droptol = 0.01;
};

enum class IpmStatus { converged, iteration_limit };

struct IpmResult {
  IpmState state;
  IpmTrace trace;
  IpmStatus status = IpmStatus::iteration_limit;
  Index iterations() const { return static_cast<Index>(trace.records.size()); }
};

// Called once per iteration with the KKT system that iteration factors.
using KktObserver = std::function<void(const SaddleSystem&, const IpmRecord&)>;

// A = H + X^{-1} Z, B = J. Throws InvalidArgument if some x_i <= 0.
SaddleSystem build_kkt(const QpProblem& prob, const IpmState& state);

// True when the smallest eigenvalue of A is below n * eps * max diag(A).
bool detect_singular_leading(const SparseMatrix& a);

// Mehrotra predictor-corrector from the least-squares starting point.
IpmResult mehrotra_solve(const QpProblem& prob, const IpmOptions& opts,
                         const KktObserver& observer = {});

double relative_duality_gap(const QpProblem& prob, const IpmState& state);

}  // namespace augprec
