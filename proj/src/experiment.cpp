#include "augprec/experiment.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <locale>
#include <map>
#include <sstream>
#include <thread>

#include "augprec/errors.hpp"
#include "augprec/matrix_market.hpp"

namespace augprec {

const char* to_string(SolverKind s) { return s == SolverKind::minres ? "minres" : "fgmres"; }

void ExperimentConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (maxit <= 0) throw InvalidArgument("maxit must be positive");
  if (leading == LeadingKind::ic && !(droptol >= 0.0))
    throw InvalidArgument("droptol must be nonnegative");
  if (leading == LeadingKind::inner_cg && !(inner_tol > 0.0))
    throw InvalidArgument("inner_tol must be positive");
  if (leading == LeadingKind::inner_cg && solver != SolverKind::fgmres)
    throw InvalidArgument("the inner-CG leading solver varies between applications; use fgmres");
  if (solver == SolverKind::fgmres && restart <= 0) throw InvalidArgument("restart must be positive");
  if (schur == SchurKind::wki && !(beta > 0.0)) throw InvalidArgument("beta must be positive");
  if (schur == SchurKind::additive)
    throw InvalidArgument("the additive Schur form is an analysis tool, not a preconditioner option");
  if (augmentation == AugmentationKind::identity && !(rho > 0.0))
    throw InvalidArgument("rho must be positive");
  if (source == ProblemSource::generator) {
    generator.validate();
    if (generator.kind == GeneratorKind::degenerate_lp)
      throw InvalidArgument("degenerate-lp is an IPM problem; use the ipm command");
  } else if (a_path.empty() || b_path.empty()) {
    throw InvalidArgument("matrix-market problems need a_path and b_path");
  }
}

namespace {

double parse_real(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return d;
}

long long parse_int(const std::string& v) {
  std::size_t pos = 0;
  const long long i = std::stoll(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return i;
}

std::uint64_t parse_u64(const std::string& v) {
  std::size_t pos = 0;
  if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
  const unsigned long long i = std::stoull(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return i;
}

Index parse_index(const std::string& v) {
  const long long i = parse_int(v);
  if (i < std::numeric_limits<Index>::min() || i > std::numeric_limits<Index>::max())
    throw std::out_of_range(v);
  return static_cast<Index>(i);
}

AugmentationKind parse_augmentation(const std::string& v) {
  if (v == "partial") return AugmentationKind::partial;
  if (v == "full") return AugmentationKind::full;
  if (v == "identity") return AugmentationKind::identity;
  throw std::invalid_argument(v);
}

LeadingKind parse_leading(const std::string& v) {
  if (v == "exact") return LeadingKind::exact;
  if (v == "diagonal") return LeadingKind::diagonal;
  if (v == "ic") return LeadingKind::ic;
  if (v == "inner_cg" || v == "inner-cg") return LeadingKind::inner_cg;
  throw std::invalid_argument(v);
}

SchurKind parse_schur(const std::string& v) {
  if (v == "exact") return SchurKind::exact;
  if (v == "diagonal") return SchurKind::diagonal;
  if (v == "wki") return SchurKind::wki;
  if (v == "bfbt") return SchurKind::bfbt;
  throw std::invalid_argument(v);
}

SolverKind parse_solver(const std::string& v) {
  if (v == "minres") return SolverKind::minres;
  if (v == "fgmres") return SolverKind::fgmres;
  throw std::invalid_argument(v);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](ExperimentConfig& c, const std::string& v) { c.name = v; }},
      {"problem",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "matrix-market") {
           c.source = ProblemSource::matrix_market;
           return;
         }
         c.source = ProblemSource::generator;
         try {
           c.generator.kind = parse_generator_kind(v);
         } catch (const InvalidArgument&) {
           throw std::invalid_argument(v);
         }
       }},
      {"n", [](ExperimentConfig& c, const std::string& v) { c.generator.n = parse_index(v); }},
      {"m", [](ExperimentConfig& c, const std::string& v) { c.generator.m = parse_index(v); }},
      {"k", [](ExperimentConfig& c, const std::string& v) { c.generator.k = parse_index(v); }},
      {"bandwidth",
       [](ExperimentConfig& c, const std::string& v) { c.generator.bandwidth = parse_index(v); }},
      {"density",
       [](ExperimentConfig& c, const std::string& v) { c.generator.density = parse_real(v); }},
      {"a_path", [](ExperimentConfig& c, const std::string& v) { c.a_path = v; }},
      {"b_path", [](ExperimentConfig& c, const std::string& v) { c.b_path = v; }},
      {"augmentation",
       [](ExperimentConfig& c, const std::string& v) { c.augmentation = parse_augmentation(v); }},
      {"rho", [](ExperimentConfig& c, const std::string& v) { c.rho = parse_real(v); }},
      {"leading", [](ExperimentConfig& c, const std::string& v) { c.leading = parse_leading(v); }},
      {"droptol", [](ExperimentConfig& c, const std::string& v) { c.droptol = parse_real(v); }},
      {"inner_tol", [](ExperimentConfig& c, const std::string& v) { c.inner_tol = parse_real(v); }},
      {"inner_maxit",
       [](ExperimentConfig& c, const std::string& v) { c.inner_maxit = parse_index(v); }},
      {"split", [](ExperimentConfig& c, const std::string& v) { c.split = parse_index(v); }},
      {"schur", [](ExperimentConfig& c, const std::string& v) { c.schur = parse_schur(v); }},
      {"beta", [](ExperimentConfig& c, const std::string& v) { c.beta = parse_real(v); }},
      {"solver", [](ExperimentConfig& c, const std::string& v) { c.solver = parse_solver(v); }},
      {"restart", [](ExperimentConfig& c, const std::string& v) { c.restart = parse_index(v); }},
      {"tol", [](ExperimentConfig& c, const std::string& v) { c.tol = parse_real(v); }},
      {"maxit", [](ExperimentConfig& c, const std::string& v) { c.maxit = parse_index(v); }},
      {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_u64(v); }},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KeyValues {
  std::string key;
  std::vector<std::string> values;
  std::size_t line;
};

}  // namespace

std::vector<ExperimentConfig> parse_config(std::istream& in, const ExperimentConfig& base) {
  std::vector<KeyValues> entries;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
    KeyValues kv{trim(line.substr(0, eq)), {}, lineno};
    if (!setters().count(kv.key)) throw ParseError("unknown key '" + kv.key + "'", lineno);
    for (const auto& e : entries)
      if (e.key == kv.key) throw ParseError("duplicate key '" + kv.key + "'", lineno);
    std::stringstream vs(line.substr(eq + 1));
    std::string item;
    while (std::getline(vs, item, ',')) {
      item = trim(item);
      if (item.empty()) throw ParseError("empty value for '" + kv.key + "'", lineno);
      kv.values.push_back(item);
    }
    if (kv.values.empty()) throw ParseError("missing value for '" + kv.key + "'", lineno);
    entries.push_back(std::move(kv));
  }

  std::vector<ExperimentConfig> out{base};
  for (const auto& kv : entries) {
    std::vector<ExperimentConfig> next;
    next.reserve(out.size() * kv.values.size());
    for (const auto& cfg : out)
      for (const auto& v : kv.values) {
        ExperimentConfig c = cfg;
        try {
          setters().at(kv.key)(c, v);
        } catch (const std::logic_error&) {
          throw ParseError("bad value '" + v + "' for '" + kv.key + "'", kv.line);
        }
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<ExperimentConfig> parse_config_file(const std::string& path,
                                                const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  return parse_config(in, base);
}

SaddleSystem build_problem(const ExperimentConfig& cfg) {
  if (cfg.source == ProblemSource::matrix_market)
    return SaddleSystem(read_matrix_market(cfg.a_path), read_matrix_market(cfg.b_path));
  switch (cfg.generator.kind) {
    case GeneratorKind::random_saddle: return generate_random_saddle(cfg.generator, cfg.seed);
    case GeneratorKind::sparse_saddle: return generate_sparse_saddle(cfg.generator, cfg.seed);
    case GeneratorKind::banded_geo: return generate_banded_geo(cfg.generator, cfg.seed);
    case GeneratorKind::degenerate_lp: break;
  }
  throw InvalidArgument("degenerate-lp does not produce a saddle system directly");
}

namespace {

std::string problem_name(const ExperimentConfig& cfg) {
  if (!cfg.name.empty()) return cfg.name;
  if (cfg.source == ProblemSource::matrix_market) return cfg.a_path + "+" + cfg.b_path;
  std::ostringstream s;
  const auto& g = cfg.generator;
  s << to_string(g.kind) << "(n=" << g.n << " m=" << g.m << " k=" << g.k;
  if (g.kind == GeneratorKind::banded_geo) s << " bw=" << g.bandwidth;
  if (g.kind == GeneratorKind::sparse_saddle) s << " density=" << g.density;
  s << ")";
  return s.str();
}

AugmentedBlock augment(const ExperimentConfig& cfg, const SaddleSystem& sys) {
  switch (cfg.augmentation) {
    case AugmentationKind::partial: return partial_augmentation(sys.a(), sys.b());
    case AugmentationKind::full:
      return build_augmented(sys.a(), sys.b(), WeightSelection::full(sys.m()));
    case AugmentationKind::identity:
      return build_augmented(sys.a(), sys.b(), WeightSelection::identity(cfg.rho));
  }
  throw InvalidArgument("unknown augmentation");
}

SchurOperator schur_for(const ExperimentConfig& cfg, const AugmentedBlock& blk,
                        const SaddleSystem& sys) {
  switch (cfg.schur) {
    case SchurKind::exact: return exact_schur(blk, sys.b());
    case SchurKind::diagonal: return diagonal_schur(blk.ak.diagonal(), sys.b());
    case SchurKind::wki: return wki_operator(blk.selection, cfg.beta, sys.m());
    case SchurKind::bfbt: return bfbt_operator(sys.a(), sys.b(), blk.selection);
    case SchurKind::additive: break;
  }
  throw InvalidArgument("unsupported Schur approximation");
}

}  // namespace

ReportRow run_experiment(const ExperimentConfig& cfg) {
  ReportRow row;
  row.problem = problem_name(cfg);
  row.augmentation = to_string(cfg.augmentation);
  row.leading = to_string(cfg.leading);
  row.schur = to_string(cfg.schur);
  row.solver = to_string(cfg.solver);
  row.seed = cfg.seed;
  std::string stage = "config";
  try {
    cfg.validate();
    stage = "problem";
    const SaddleSystem sys = build_problem(cfg);
    row.n = sys.n();
    row.m = sys.m();
    stage = "augmentation";
    const AugmentedBlock blk = augment(cfg, sys);
    row.rank_w = cfg.augmentation == AugmentationKind::identity ? sys.n() : blk.selection.rank();
    row.nnz_ak = blk.ak.nnz();
    stage = "preconditioner";
    LeadingSpec spec;
    spec.kind = cfg.leading;
    spec.droptol = cfg.droptol;
    spec.cg.tol = cfg.inner_tol;
    spec.cg.maxit = cfg.inner_maxit;
    spec.cg.split = cfg.split < 0 ? sys.m() : cfg.split;
    const BlockDiagPrecond p = make_with_schur(blk, spec, schur_for(cfg, blk, sys));
    if (cfg.leading == LeadingKind::ic) {
      row.has_ic = true;
      row.nnz_ic = p.leading().factor_nnz();
    }
    stage = "solve";
    Rng rng = derived_rng(cfg.seed, 0x5eed);
    std::normal_distribution<double> normal;
    Vector rhs(static_cast<std::size_t>(sys.n() + sys.m()));
    for (auto& v : rhs) v = normal(rng);
    const SolveReport rep =
        cfg.solver == SolverKind::minres
            ? solve_minres(sys, p, rhs, cfg.tol, cfg.maxit)
            : solve_fgmres(sys, p, rhs, cfg.tol, cfg.restart, cfg.maxit);
    row.iterations = rep.iterations;
    row.relative_residual = rep.true_relative_residual;
    row.converged = rep.converged;
    row.seconds_total = rep.seconds;
    row.seconds_per_iteration = rep.iterations > 0 ? rep.seconds / rep.iterations : 0.0;
    if (!rep.converged) row.error = std::string("solve: ") + to_string(rep.status);
  } catch (const std::exception& e) {
    row.converged = false;
    row.error = stage + ": " + e.what();
  }
  return row;
}

std::vector<ReportRow> run_sweep(const std::vector<ExperimentConfig>& cfgs, unsigned threads) {
  std::vector<ReportRow> rows(cfgs.size());
  if (threads == 0) threads = 1;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cfgs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) rows[i] = run_experiment(cfgs[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

namespace {

// Quotes a CSV field when it holds a delimiter, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

const char* const kReportHeader =
    "problem,augmentation,leading,schur,solver,n,m,rank_w,nnz_ak,nnz_ic,iterations,"
    "relative_residual,converged,seconds_per_iteration,seconds_total,rng,seed,error";

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << kReportHeader << '\n';
  for (const auto& r : rows) {
    s << csv_field(r.problem) << ',' << r.augmentation << ',' << r.leading << ',' << r.schur
      << ',' << r.solver << ',' << r.n << ',' << r.m << ',' << r.rank_w << ',' << r.nnz_ak << ',';
    if (r.has_ic) s << r.nnz_ic;
    s << ',' << r.iterations << ',' << std::setprecision(6) << r.relative_residual << ','
      << (r.converged ? "true" : "false") << ',' << r.seconds_per_iteration << ','
      << r.seconds_total << ',' << kRngName << ',' << r.seed << ',' << csv_field(r.error)
      << '\n';
  }
  out << s.str();
}

const char* const kIpmHeader =
    "iteration,duality_gap,relative_gap,primal_residual,dual_residual,leading_singular,"
    "policy,rank_w,predictor_iterations,corrector_iterations,inner_failure,step_primal,"
    "step_dual,rng,seed";

void write_ipm_trace_csv(std::ostream& out, const IpmResult& result, std::uint64_t seed) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << kIpmHeader << '\n' << std::setprecision(6);
  for (const auto& r : result.trace.records) {
    s << r.iteration << ',' << r.duality_gap << ',' << r.relative_gap << ','
      << r.primal_residual << ',' << r.dual_residual << ','
      << (r.leading_singular ? "true" : "false") << ',' << to_string(r.policy) << ','
      << r.rank_w << ',';
    if (r.predictor) s << r.predictor->iterations;
    s << ',';
    if (r.corrector) s << r.corrector->iterations;
    s << ',' << (r.inner_failure ? "true" : "false") << ',' << r.step_primal << ','
      << r.step_dual << ',' << kRngName << ',' << seed << '\n';
  }
  out << s.str();
}

}  // namespace augprec
