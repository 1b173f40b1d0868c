// Command-line front end: gen, eig-verify, solve, sweep, ipm.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <thread>

#include "augprec/analysis.hpp"
#include "augprec/errors.hpp"
#include "augprec/experiment.hpp"
#include "augprec/generators.hpp"
#include "augprec/ipm.hpp"
#include "augprec/matrix_market.hpp"

using namespace augprec;

namespace {

constexpr int kExitFailedRow = 1;
constexpr int kExitUsage = 2;

struct GenOptions {
  std::string kind = "random-saddle";
  Index n = 40, m = 10, k = 5, bandwidth = 3;
  double density = 0.2;
};

void add_gen_options(CLI::App* cmd, GenOptions& g) {
  cmd->add_option("--kind", g.kind, "random-saddle | sparse-saddle | banded-geo | degenerate-lp")
      ->capture_default_str();
  cmd->add_option("--n", g.n, "primal size")->capture_default_str();
  cmd->add_option("--m", g.m, "constraint count")->capture_default_str();
  cmd->add_option("--k", g.k, "nullity of A (duplicated columns for degenerate-lp)")
      ->capture_default_str();
  cmd->add_option("--bandwidth", g.bandwidth, "banded-geo bandwidth")->capture_default_str();
  cmd->add_option("--density", g.density, "sparse generators")->capture_default_str();
}

GeneratorSpec to_spec(const GenOptions& g) {
  GeneratorSpec s;
  s.kind = parse_generator_kind(g.kind);
  s.n = g.n;
  s.m = g.m;
  s.k = g.k;
  s.bandwidth = g.bandwidth;
  s.density = g.density;
  return s;
}

SaddleSystem generate(const GeneratorSpec& s, std::uint64_t seed) {
  switch (s.kind) {
    case GeneratorKind::random_saddle: return generate_random_saddle(s, seed);
    case GeneratorKind::sparse_saddle: return generate_sparse_saddle(s, seed);
    case GeneratorKind::banded_geo: return generate_banded_geo(s, seed);
    case GeneratorKind::degenerate_lp: break;
  }
  throw InvalidArgument("degenerate-lp is not a saddle system");
}

SparseMatrix column(const Vector& v) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < v.size(); ++i) t.push_back({static_cast<Index>(i), 0, v[i]});
  return SparseMatrix::from_triplets(static_cast<Index>(v.size()), 1, t);
}

// Writes to --out when given, stdout otherwise.
template <class F>
void with_output(const std::string& path, F&& f) {
  if (path.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  f(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augmentation preconditioners for saddle-point systems"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;
  GenOptions gen;

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "write a generated problem as Matrix Market files");
  std::string prefix = "problem";
  add_gen_options(gen_cmd, gen);
  gen_cmd->add_option("--seed", seed)->capture_default_str();
  gen_cmd->add_option("--out", prefix, "output prefix; writes <prefix>_A.mtx and <prefix>_B.mtx")
      ->capture_default_str();

  // eig-verify
  auto* eig_cmd = app.add_subcommand("eig-verify", "check the spectral theorems on a generated system");
  Index rank_w = -1;
  add_gen_options(eig_cmd, gen);
  eig_cmd->add_option("--seed", seed)->capture_default_str();
  eig_cmd->add_option("--rank-w", rank_w, "rows 0..r-1 form W (default: nullity of A)");
  eig_cmd->add_option("--out", out_path, "CSV of verdicts");

  // solve / sweep
  auto* solve_cmd = app.add_subcommand("solve", "run one experiment");
  auto* sweep_cmd = app.add_subcommand("sweep", "run every combination in a config file");
  std::string config_path;
  double tol = 0.0;
  Index maxit = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  for (auto* cmd : {solve_cmd, sweep_cmd}) {
    cmd->add_option("--config", config_path, "key = value experiment file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "overrides the config seed");
    cmd->add_option("--tol", tol, "overrides the config tolerance");
    cmd->add_option("--maxit", maxit, "overrides the config iteration cap");
    cmd->add_option("--out", out_path, "CSV report (default stdout)");
  }
  sweep_cmd->get_option("--config")->required();
  sweep_cmd->add_option("--threads", threads)->capture_default_str();

  // ipm
  auto* ipm_cmd = app.add_subcommand("ipm", "interior-point run on a seeded LP");
  Index lp_n = 60, lp_m = 20, lp_dup = 0;
  std::string inner = "direct";
  double gap_tol = 1e-6, inner_tol = 1e-7;
  Index ipm_maxit = 100;
  ipm_cmd->add_option("--n", lp_n)->capture_default_str();
  ipm_cmd->add_option("--m", lp_m)->capture_default_str();
  ipm_cmd->add_option("--duplicates", lp_dup, "duplicated basic columns (degenerate LP)")
      ->capture_default_str();
  ipm_cmd->add_option("--inner", inner)->check(CLI::IsMember({"direct", "minres"}))
      ->capture_default_str();
  ipm_cmd->add_option("--gap-tol", gap_tol)->capture_default_str();
  ipm_cmd->add_option("--tol", inner_tol, "inner MINRES tolerance")->capture_default_str();
  ipm_cmd->add_option("--maxit", ipm_maxit, "IPM iteration cap")->capture_default_str();
  ipm_cmd->add_option("--seed", seed)->capture_default_str();
  ipm_cmd->add_option("--out", out_path, "per-iteration CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) {
      const GeneratorSpec spec = to_spec(gen);
      if (spec.kind == GeneratorKind::degenerate_lp) {
        const QpProblem lp = generate_degenerate_lp(spec, seed);
        write_matrix_market(prefix + "_J.mtx", lp.j);
        write_matrix_market(prefix + "_b.mtx", column(lp.b));
        write_matrix_market(prefix + "_c.mtx", column(lp.c));
      } else {
        const SaddleSystem sys = generate(spec, seed);
        write_matrix_market(prefix + "_A.mtx", sys.a());
        write_matrix_market(prefix + "_B.mtx", sys.b());
      }
      return 0;
    }

    if (*eig_cmd) {
      const SaddleSystem sys = generate(to_spec(gen), seed);
      const Index r = rank_w < 0 ? check_wellposed(sys).nullity_a : rank_w;
      if (r > sys.m()) throw InvalidArgument("--rank-w exceeds m");
      std::vector<Index> rows(static_cast<std::size_t>(r));
      std::iota(rows.begin(), rows.end(), 0);
      const WeightSelection sel = WeightSelection::partial(rows);
      std::vector<TheoremVerdict> verdicts{verify_four_eig(sys, sel), verify_two_eig(sys),
                                           verify_interval_bounds(sys, sel)};
      for (auto& v : verify_identities(sys, sel)) verdicts.push_back(std::move(v));
      verdicts.push_back(verify_lower_bound(sys));
      bool failed = false;
      with_output(out_path, [&](std::ostream& os) {
        os << "verdict,applicable,passed,max_deviation,tolerance,details\n";
        for (const auto& v : verdicts) {
          failed |= v.applicable && !v.passed;
          os << to_string(v.name) << ',' << (v.applicable ? "true" : "false") << ','
             << (v.passed ? "true" : "false") << ',' << std::setprecision(3) << v.max_deviation
             << ',' << v.tolerance << ",\"" << v.details << "\"\n";
        }
      });
      return failed ? kExitFailedRow : 0;
    }

    if (*solve_cmd || *sweep_cmd) {
      std::vector<ExperimentConfig> cfgs =
          config_path.empty() ? std::vector<ExperimentConfig>{ExperimentConfig{}}
                              : parse_config_file(config_path);
      if (*solve_cmd && cfgs.size() != 1)
        throw InvalidArgument("solve takes a single configuration; use sweep for lists");
      auto* cmd = *solve_cmd ? solve_cmd : sweep_cmd;
      for (auto& c : cfgs) {
        if (cmd->count("--seed")) c.seed = seed;
        if (cmd->count("--tol")) c.tol = tol;
        if (cmd->count("--maxit")) c.maxit = maxit;
      }
      const auto rows = run_sweep(cfgs, *solve_cmd ? 1u : threads);
      with_output(out_path, [&](std::ostream& os) { write_report_csv(os, rows); });
      for (const auto& r : rows)
        if (!r.error.empty()) return kExitFailedRow;
      return 0;
    }

    if (*ipm_cmd) {
      const QpProblem lp =
          lp_dup > 0 ? generate_degenerate_lp(
                           GeneratorSpec{GeneratorKind::degenerate_lp, lp_n, lp_m, lp_dup, 3, 0.3},
                           seed)
                     : generate_random_lp(lp_n, lp_m, seed);
      IpmOptions opts;
      opts.inner = inner == "minres" ? InnerSolver::minres : InnerSolver::direct;
      opts.gap_tol = gap_tol;
      opts.inner_tol = inner_tol;
      opts.max_iterations = ipm_maxit;
      const IpmResult res = mehrotra_solve(lp, opts);
      with_output(out_path, [&](std::ostream& os) { write_ipm_trace_csv(os, res, seed); });
      std::cerr << (res.status == IpmStatus::converged ? "converged" : "iteration limit")
                << " after " << res.iterations() << " iterations\n";
      return res.status == IpmStatus::converged ? 0 : kExitFailedRow;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailedRow;
  }
  return 0;
}
