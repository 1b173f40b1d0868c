#pragma once

#include <functional>
#include <span>
#include <vector>

#include "augprec/vector.hpp"

namespace augprec {

using LinearOperator = std::function<Vector(std::span<const double>)>;

enum class SolveStatus { converged, max_iterations, breakdown };

const char* to_string(SolveStatus s);

struct SolveReport {
  Vector solution;
  Index iterations = 0;
  // Relative residual estimate from the solver recurrence, one entry per
  // iteration plus the initial one. MINRES records the preconditioned norm,
  // PCG and FGMRES the unpreconditioned norm.
  std::vector<double> relative_residuals;
  // ||b - K x|| / ||b|| recomputed at exit.
  double true_relative_residual = 0.0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  double seconds = 0.0;
};

// True-residual backstop: a report claims convergence only when the
// recomputed residual is within this factor of the requested tolerance.
inline constexpr double kTrueResidualSlack = 10.0;

// Preconditioned MINRES from a zero initial guess. `precond` applies M^{-1}
// for an SPD M. Stops when the preconditioned residual estimate drops below
// tol times its initial value and the true residual passes the backstop.
SolveReport minres(const LinearOperator& k, const LinearOperator& precond,
                   std::span<const double> b, double tol, Index maxit);

// Preconditioned CG. Throws IndefiniteOperator when p^T K p <= 0.
SolveReport pcg(const LinearOperator& k, const LinearOperator& precond,
                std::span<const double> b, double tol, Index maxit);

// Right-preconditioned flexible GMRES(restart); the preconditioner may vary
// between applications.
SolveReport fgmres(const LinearOperator& k, const LinearOperator& precond,
                   std::span<const double> b, double tol, Index restart, Index maxit);

}  // namespace augprec
