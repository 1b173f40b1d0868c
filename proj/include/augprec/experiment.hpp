#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "augprec/augmentation.hpp"
#include "augprec/generators.hpp"
#include "augprec/ipm.hpp"
#include "augprec/precond.hpp"
#include "augprec/schur.hpp"

namespace augprec {

enum class ProblemSource { generator, matrix_market };
enum class SolverKind { minres, fgmres };

const char* to_string(SolverKind s);

struct ExperimentConfig {
  std::string name;  // defaults to a description of the problem
  ProblemSource source = ProblemSource::generator;
  GeneratorSpec generator{GeneratorKind::random_saddle, 40, 10, 5, 3, 0.2};
  std::string a_path;  // matrix_market only
  std::string b_path;

  AugmentationKind augmentation = AugmentationKind::partial;
  double rho = 1.0;  // identity only

  LeadingKind leading = LeadingKind::exact;
  double droptol = 0.01;   // ic
  double inner_tol = 0.1;  // inner_cg
  Index inner_maxit = 200;
  Index split = -1;  // inner_cg block split; -1 means m

  SchurKind schur = SchurKind::exact;
  double beta = 1e-3;  // wki

  SolverKind solver = SolverKind::minres;
  Index restart = 30;
  double tol = 1e-8;
  Index maxit = 1000;
  std::uint64_t seed = 1;

  // Throws InvalidArgument on nonpositive tolerances, a flexible leading
  // solver paired with MINRES, or a Schur kind the harness cannot build.
  void validate() const;
};

// Flat "key = value" text, '#' starts a comment. A comma-separated value
// expands into one config per entry; several such keys form their
// Cartesian product (earlier keys vary slowest). Throws ParseError.
std::vector<ExperimentConfig> parse_config(std::istream& in,
                                           const ExperimentConfig& base = {});
std::vector<ExperimentConfig> parse_config_file(const std::string& path,
                                                const ExperimentConfig& base = {});

struct ReportRow {
  std::string problem;
  std::string augmentation;
  std::string leading;
  std::string schur;
  std::string solver;
  Index n = 0;
  Index m = 0;
  Index rank_w = 0;
  std::size_t nnz_ak = 0;
  bool has_ic = false;
  std::size_t nnz_ic = 0;
  Index iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  double seconds_total = 0.0;
  double seconds_per_iteration = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
};

SaddleSystem build_problem(const ExperimentConfig& cfg);

// Never throws for per-stage failures; they land in row.error.
ReportRow run_experiment(const ExperimentConfig& cfg);

// Runs the configs on up to `threads` workers; rows come back in input order.
std::vector<ReportRow> run_sweep(const std::vector<ExperimentConfig>& cfgs, unsigned threads);

// Header line plus one line per row. Every row carries the generator name
// and seed so it can be reproduced on its own.
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
extern const char* const kReportHeader;

void write_ipm_trace_csv(std::ostream& out, const IpmResult& result, std::uint64_t seed);
extern const char* const kIpmHeader;

}  // namespace augprec
