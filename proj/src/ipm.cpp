#include "augprec/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "augprec/augmentation.hpp"
#include "augprec/dense_matrix.hpp"
#include "augprec/errors.hpp"
#include "augprec/precond.hpp"
#include "augprec/sym_eigen.hpp"

namespace augprec {

const char* to_string(PrecondPolicy p) {
  switch (p) {
    case PrecondPolicy::direct: return "direct";
    case PrecondPolicy::ideal_diagonal: return "ideal_diagonal";
    case PrecondPolicy::ic_diagonal: return "ic_diagonal";
    case PrecondPolicy::augmented_diagonal: return "augmented_diagonal";
  }
  return "?";
}

SaddleSystem build_kkt(const QpProblem& prob, const IpmState& state) {
  const Index n = prob.n();
  if (static_cast<Index>(state.x.size()) != n || static_cast<Index>(state.z.size()) != n)
    throw DimensionMismatch("build_kkt: state does not match the problem");
  Vector d(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!(state.x[i] > 0.0))
      throw InvalidArgument("build_kkt: x[" + std::to_string(i) + "] is not positive");
    d[i] = state.z[i] / state.x[i];
  }
  SparseMatrix a = prob.h.nnz() == 0 ? SparseMatrix::diagonal(d)
                                     : add(prob.h, SparseMatrix::diagonal(d));
  return SaddleSystem(std::move(a), prob.j);
}

namespace {

bool is_diagonal(const SparseMatrix& a) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index c : a.row_cols(i))
      if (c != i) return false;
  return true;
}

}  // namespace

bool detect_singular_leading(const SparseMatrix& a) {
  const Index n = a.rows();
  if (n == 0) return false;
  const Vector diag = a.diagonal();
  const double max_diag = *std::max_element(diag.begin(), diag.end());
  const double threshold = n * std::numeric_limits<double>::epsilon() * max_diag;
  double min_eig;
  if (is_diagonal(a))
    min_eig = *std::min_element(diag.begin(), diag.end());
  else
    min_eig = sym_eigenvalues(a.to_dense()).front();
  return min_eig < threshold;
}

double relative_duality_gap(const QpProblem& prob, const IpmState& s) {
  double obj = dot(prob.c, s.x);
  if (!prob.is_lp()) obj += 0.5 * dot(s.x, spmv(prob.h, s.x));
  return dot(s.x, s.z) / (1.0 + std::abs(obj));
}

namespace {

struct Residuals {
  Vector rd;  // Hx + c - J^T y - z
  Vector rp;  // Jx - b
};

Residuals residuals(const QpProblem& prob, const IpmState& s) {
  Residuals r;
  r.rd = spmv_transpose(prob.j, s.y);
  scale(-1.0, r.rd);
  axpy(1.0, prob.c, r.rd);
  axpy(-1.0, s.z, r.rd);
  if (!prob.is_lp()) axpy(1.0, spmv(prob.h, s.x), r.rd);
  r.rp = spmv(prob.j, s.x);
  axpy(-1.0, prob.b, r.rp);
  return r;
}

IpmState initial_point(const QpProblem& prob) {
  const Index n = prob.n();
  const DenseMatrix jd = prob.j.to_dense();
  const DenseMatrix jjt = multiply(jd, transpose(jd));
  IpmState s;
  // x = J^T (J J^T)^{-1} b, y = (J J^T)^{-1} J c, z = c - J^T y
  s.x = multiply(transpose(jd), lu_solve(jjt, prob.b));
  s.y = lu_solve(jjt, multiply(jd, prob.c));
  s.z = prob.c;
  axpy(-1.0, spmv_transpose(prob.j, s.y), s.z);
  for (Index i = 0; i < n; ++i) {
    s.x[i] = std::max(s.x[i], 1.0);
    s.z[i] = std::max(s.z[i], 1.0);
  }
  return s;
}

double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

// Solves K [dx; dyhat] = [top; bottom] for one iteration, either directly or
// with MINRES and the iteration's preconditioner.
class KktSolver {
 public:
  KktSolver(const QpProblem& prob, const SaddleSystem& sys, const IpmOptions& opts,
            IpmRecord& rec)
      : sys_(sys), opts_(opts), rec_(rec) {
    rec_.leading_singular = detect_singular_leading(sys.a());
    if (opts.inner == InnerSolver::direct) {
      dense_ = sys.assemble_dense();
      rec_.policy = PrecondPolicy::direct;
      return;
    }
    try {
      if (!rec_.leading_singular) {
        AugmentedBlock blk{sys.a(), WeightSelection::partial({}), 0.0, std::nullopt};
        if (prob.is_lp()) {
          rec_.policy = PrecondPolicy::ideal_diagonal;
          precond_.emplace(make_diagonal(blk, sys.b()));
        } else {
          rec_.policy = PrecondPolicy::ic_diagonal;
          precond_.emplace(make_ic(blk, sys.b(), opts.ic_droptol));
        }
      } else {
        rec_.policy = PrecondPolicy::augmented_diagonal;
        AugmentedBlock blk = [&] {
          try {
            return partial_augmentation(sys.a(), sys.b());
          } catch (const StructuralDeficiency&) {
            return build_augmented(sys.a(), sys.b(), WeightSelection::full(sys.m()));
          }
        }();
        rec_.rank_w = blk.selection.rank();
        precond_.emplace(make_diagonal(blk, sys.b()));
      }
    } catch (const Error& e) {
      note_failure(std::string("preconditioner: ") + e.what());
    }
  }

  Vector solve(const Vector& rhs, std::optional<SolveReport>& report) {
    if (precond_) {
      SolveReport rep = solve_minres(sys_, *precond_, rhs, opts_.inner_tol, opts_.inner_maxit);
      Vector x = rep.solution;
      const bool ok = rep.converged;
      report = std::move(rep);
      if (ok) return x;
      note_failure("MINRES did not converge");
      if (all_finite(x)) return x;
    }
    if (dense_.rows() == 0) dense_ = sys_.assemble_dense();
    return lu_solve(dense_, rhs);
  }

 private:
  void note_failure(std::string msg) {
    if (!rec_.inner_failure) rec_.failure = std::move(msg);
    rec_.inner_failure = true;
  }

  const SaddleSystem& sys_;
  const IpmOptions& opts_;
  IpmRecord& rec_;
  DenseMatrix dense_{0, 0};
  std::optional<BlockDiagPrecond> precond_;
};

}  // namespace

IpmResult mehrotra_solve(const QpProblem& prob, const IpmOptions& opts,
                         const KktObserver& observer) {
  const Index n = prob.n();
  const Index m = prob.m();
  if (prob.j.cols() != n || static_cast<Index>(prob.b.size()) != m ||
      static_cast<Index>(prob.c.size()) != n ||
      (prob.h.nnz() != 0 && (prob.h.rows() != n || prob.h.cols() != n)))
    throw DimensionMismatch("mehrotra_solve: inconsistent problem dimensions");
  if (!(opts.gap_tol > 0.0)) throw InvalidArgument("mehrotra_solve: gap_tol must be positive");

  IpmResult result;
  IpmState& s = result.state;
  s = initial_point(prob);
  const double bnorm = 1.0 + norm2(prob.b);
  const double cnorm = 1.0 + norm2(prob.c);

  for (Index it = 0;; ++it) {
    const Residuals r = residuals(prob, s);
    const double gap = dot(s.x, s.z);
    const double pres = norm2(r.rp) / bnorm;
    const double dres = norm2(r.rd) / cnorm;
    if (gap <= opts.gap_tol && pres <= opts.feas_tol && dres <= opts.feas_tol) {
      result.status = IpmStatus::converged;
      break;
    }
    if (it >= opts.max_iterations) break;

    IpmRecord rec;
    rec.iteration = it;
    rec.duality_gap = gap;
    rec.relative_gap = relative_duality_gap(prob, s);
    rec.primal_residual = pres;
    rec.dual_residual = dres;

    const SaddleSystem sys = build_kkt(prob, s);
    KktSolver solver(prob, sys, opts, rec);
    if (observer) observer(sys, rec);

    const double mu = gap / n;
    auto direction = [&](const Vector& rxz, std::optional<SolveReport>& report) {
      Vector rhs(static_cast<std::size_t>(n + m));
      for (Index i = 0; i < n; ++i) rhs[i] = -r.rd[i] - rxz[i] / s.x[i];
      for (Index i = 0; i < m; ++i) rhs[n + i] = -r.rp[i];
      Vector sol = solver.solve(rhs, report);
      Vector dx(sol.begin(), sol.begin() + n);
      Vector dy(static_cast<std::size_t>(m));
      for (Index i = 0; i < m; ++i) dy[i] = -sol[n + i];
      Vector dz(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) dz[i] = (-rxz[i] - s.z[i] * dx[i]) / s.x[i];
      return std::tuple{std::move(dx), std::move(dy), std::move(dz)};
    };

    // Predictor
    Vector rxz(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) rxz[i] = s.x[i] * s.z[i];
    auto [dx_a, dy_a, dz_a] = direction(rxz, rec.predictor);
    const double ap = max_step(s.x, dx_a);
    const double ad = max_step(s.z, dz_a);
    double mu_aff = 0.0;
    for (Index i = 0; i < n; ++i) mu_aff += (s.x[i] + ap * dx_a[i]) * (s.z[i] + ad * dz_a[i]);
    mu_aff /= n;
    const double sigma = std::pow(mu_aff / mu, 3);

    // Corrector with the same KKT matrix
    s.tau = sigma * mu;
    for (Index i = 0; i < n; ++i) rxz[i] += dx_a[i] * dz_a[i] - s.tau;
    auto [dx, dy, dz] = direction(rxz, rec.corrector);
    const double sp = std::min(1.0, 0.995 * max_step(s.x, dx));
    const double sd = std::min(1.0, 0.995 * max_step(s.z, dz));
    axpy(sp, dx, s.x);
    axpy(sd, dy, s.y);
    axpy(sd, dz, s.z);
    rec.step_primal = sp;
    rec.step_dual = sd;
    rec.min_x = *std::min_element(s.x.begin(), s.x.end());
    rec.min_z = *std::min_element(s.z.begin(), s.z.end());
    s.iteration = it + 1;
    result.trace.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace augprec
