#include "augprec/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "augprec/errors.hpp"

namespace augprec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double true_residual(const LinearOperator& k, std::span<const double> b,
                     std::span<const double> x, double bnorm) {
  Vector r = k(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r) / bnorm;
}

SolveReport zero_rhs(std::size_t n) {
  SolveReport rep;
  rep.solution.assign(n, 0.0);
  rep.relative_residuals = {0.0};
  rep.converged = true;
  rep.status = SolveStatus::converged;
  return rep;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "?";
}

SolveReport minres(const LinearOperator& k, const LinearOperator& precond,
                   std::span<const double> b, double tol, Index maxit) {
  const auto t0 = Clock::now();
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return zero_rhs(n);

  SolveReport rep;
  Vector x(n, 0.0);
  Vector r1(b.begin(), b.end());
  Vector r2 = r1;
  Vector y = precond(r1);
  const double beta1_sq = dot(r1, y);
  if (!(beta1_sq > 0.0)) throw IndefiniteOperator("minres: preconditioner not SPD");
  const double beta1 = std::sqrt(beta1_sq);

  double beta = beta1, oldb = 0.0;
  double dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  Vector w(n, 0.0), w1(n, 0.0), w2(n, 0.0), v(n);
  rep.relative_residuals.push_back(1.0);
  rep.status = SolveStatus::max_iterations;

  for (Index itn = 1; itn <= maxit; ++itn) {
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / beta;
    y = k(v);
    if (itn >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    r1.swap(r2);
    r2 = y;
    y = precond(r2);
    oldb = beta;
    const double beta_sq = dot(r2, y);
    if (beta_sq < 0.0) throw IndefiniteOperator("minres: preconditioner not SPD");
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma =
        std::max(std::hypot(gbar, beta), std::numeric_limits<double>::epsilon());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    for (std::size_t i = 0; i < n; ++i)
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    axpy(phi, w, x);

    rep.iterations = itn;
    rep.relative_residuals.push_back(phibar / beta1);

    const bool lucky = beta <= std::numeric_limits<double>::epsilon() * beta1;
    if (phibar <= tol * beta1 || lucky) {
      const double tr = true_residual(k, b, x, bnorm);
      if (tr <= kTrueResidualSlack * tol || lucky) {
        rep.true_relative_residual = tr;
        rep.converged = tr <= kTrueResidualSlack * tol;
        rep.status = rep.converged ? SolveStatus::converged : SolveStatus::breakdown;
        rep.solution = std::move(x);
        rep.seconds = seconds_since(t0);
        return rep;
      }
    }
  }
  rep.true_relative_residual = true_residual(k, b, x, bnorm);
  rep.converged = false;
  rep.solution = std::move(x);
  rep.seconds = seconds_since(t0);
  return rep;
}

SolveReport pcg(const LinearOperator& k, const LinearOperator& precond,
                std::span<const double> b, double tol, Index maxit) {
  const auto t0 = Clock::now();
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return zero_rhs(n);

  SolveReport rep;
  Vector x(n, 0.0);
  Vector r(b.begin(), b.end());
  Vector z = precond(r);
  Vector p = z;
  double rz = dot(r, z);
  rep.relative_residuals.push_back(1.0);
  rep.status = SolveStatus::max_iterations;

  for (Index itn = 1; itn <= maxit; ++itn) {
    const Vector kp = k(p);
    const double curvature = dot(p, kp);
    if (!(curvature > 0.0))
      throw IndefiniteOperator("pcg: p^T K p = " + std::to_string(curvature));
    const double alpha = rz / curvature;
    axpy(alpha, p, x);
    axpy(-alpha, kp, r);
    const double rel = norm2(r) / bnorm;
    rep.iterations = itn;
    rep.relative_residuals.push_back(rel);
    if (rel <= tol) {
      rep.status = SolveStatus::converged;
      break;
    }
    z = precond(r);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.true_relative_residual = true_residual(k, b, x, bnorm);
  rep.converged = rep.status == SolveStatus::converged &&
                  rep.true_relative_residual <= kTrueResidualSlack * tol;
  rep.solution = std::move(x);
  rep.seconds = seconds_since(t0);
  return rep;
}

SolveReport fgmres(const LinearOperator& k, const LinearOperator& precond,
                   std::span<const double> b, double tol, Index restart, Index maxit) {
  const auto t0 = Clock::now();
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return zero_rhs(n);
  if (restart < 1) throw InvalidArgument("fgmres: restart must be positive");

  SolveReport rep;
  rep.relative_residuals.push_back(1.0);
  rep.status = SolveStatus::max_iterations;
  Vector x(n, 0.0);
  Index total = 0;

  const auto rs = static_cast<std::size_t>(restart);
  std::vector<Vector> basis(rs + 1), zvecs(rs);
  std::vector<std::vector<double>> h(rs + 1, std::vector<double>(rs, 0.0));
  std::vector<double> cs(rs), sn(rs), g(rs + 1);

  while (total < maxit) {
    Vector r = k(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double rnorm = norm2(r);
    if (rnorm / bnorm <= tol) {
      rep.status = SolveStatus::converged;
      break;
    }
    basis[0] = r;
    scale(1.0 / rnorm, basis[0]);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;

    std::size_t j = 0;
    bool happy = false;
    for (; j < rs && total < maxit; ++j) {
      zvecs[j] = precond(basis[j]);
      Vector wv = k(zvecs[j]);
      for (std::size_t i = 0; i <= j; ++i) {
        h[i][j] = dot(wv, basis[i]);
        axpy(-h[i][j], basis[i], wv);
      }
      const double hnext = norm2(wv);
      h[j + 1][j] = hnext;
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = h[j][j] / denom;
      sn[j] = h[j + 1][j] / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++total;
      const double rel = std::abs(g[j + 1]) / bnorm;
      rep.relative_residuals.push_back(rel);
      happy = hnext <= std::numeric_limits<double>::epsilon() * bnorm;
      if (!happy) {
        basis[j + 1] = std::move(wv);
        scale(1.0 / hnext, basis[j + 1]);
      }
      if (rel <= tol || happy) {
        ++j;
        break;
      }
    }

    // Back substitution for the cycle's coefficients, x += Z y.
    std::vector<double> yv(j, 0.0);
    for (std::size_t i = j; i-- > 0;) {
      double s = g[i];
      for (std::size_t l = i + 1; l < j; ++l) s -= h[i][l] * yv[l];
      yv[i] = s / h[i][i];
    }
    for (std::size_t i = 0; i < j; ++i) axpy(yv[i], zvecs[i], x);

    if (rep.relative_residuals.back() <= tol || happy) {
      rep.status = happy && rep.relative_residuals.back() > tol ? SolveStatus::breakdown
                                                                 : SolveStatus::converged;
      break;
    }
  }

  rep.iterations = total;
  rep.true_relative_residual = true_residual(k, b, x, bnorm);
  rep.converged = rep.true_relative_residual <= kTrueResidualSlack * tol;
  if (rep.converged) rep.status = SolveStatus::converged;
  rep.solution = std::move(x);
  rep.seconds = seconds_since(t0);
  return rep;
}

}  // namespace augprec
