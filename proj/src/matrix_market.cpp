#include "augprec/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "augprec/errors.hpp"

namespace augprec {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input, expected a %%MatrixMarket banner", 1);
  ++lineno;

  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("object '" + object + "' is not 'matrix'", lineno);
  if (format != "coordinate")
    throw UnsupportedField("format '" + format + "' is not supported, only 'coordinate'");
  if (field == "complex" || field == "pattern")
    throw UnsupportedField("field '" + field + "' is not supported");
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError("unknown field '" + field + "'", lineno);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    if (symmetry == "skew-symmetric" || symmetry == "hermitian")
      throw UnsupportedField("symmetry '" + symmetry + "' is not supported");
    throw ParseError("unknown symmetry '" + symmetry + "'", lineno);
  }

  long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    std::istringstream size(line);
    std::string extra;
    if (!(size >> rows >> cols >> entries) || (size >> extra))
      throw ParseError("malformed size line", lineno);
    if (rows < 0 || cols < 0 || entries < 0) throw ParseError("negative size", lineno);
    if (symmetric && rows != cols) throw ParseError("symmetric matrix must be square", lineno);
    if (rows > std::numeric_limits<Index>::max() || cols > std::numeric_limits<Index>::max())
      throw ParseError("dimensions exceed the index type", lineno);
    break;
  }
  if (rows < 0) throw ParseError("missing size line", lineno + 1);

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    if (seen == entries) throw ParseError("more entries than the size line declares", lineno);
    std::istringstream es(line);
    long i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(es >> i >> j >> v) || (es >> extra)) throw ParseError("malformed entry", lineno);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") outside a " + std::to_string(rows) + " x " +
                           std::to_string(cols) + " matrix",
                       lineno);
    if (!std::isfinite(v)) throw ParseError("non-finite value", lineno);
    if (symmetric && j > i) throw ParseError("symmetric file has an upper-triangle entry", lineno);
    const auto r = static_cast<Index>(i - 1), c = static_cast<Index>(j - 1);
    t.push_back({r, c, v});
    if (symmetric && r != c) t.push_back({c, r, v});
    ++seen;
  }
  if (seen != entries)
    throw ParseError("expected " + std::to_string(entries) + " entries, found " +
                         std::to_string(seen),
                     lineno);
  return SparseMatrix::from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), t);
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < m.rows(); ++i) {
    const auto cols = m.row_cols(i);
    const auto vals = m.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_matrix_market(out, m);
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

}  // namespace augprec
