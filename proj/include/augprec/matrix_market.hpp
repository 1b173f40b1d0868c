#pragma once

#include <iosfwd>
#include <string>

#include "augprec/sparse_matrix.hpp"

namespace augprec {

// Coordinate format only; real or integer fields, general or symmetric.
// Symmetric files list the lower triangle and are mirrored on read.
// Throws ParseError (with the 1-based line) or UnsupportedField.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

// Writes "coordinate real general" with 17 significant digits, so reading
// the file back reproduces the canonical CSR exactly.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

}  // namespace augprec
