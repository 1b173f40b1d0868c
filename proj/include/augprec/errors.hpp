#pragma once

#include <stdexcept>
#include <string>

namespace augprec {

// Root of every error raised by the library. Catch this to treat all
// numerical and I/O failures uniformly (the harness records them as failed
// rows).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// A nonpositive pivot was met while factoring a matrix expected to be SPD.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// Incomplete factorization produced a nonpositive pivot after dropping.
class BreakdownPivot : public NotPositiveDefinite {
 public:
  using NotPositiveDefinite::NotPositiveDefinite;
};

class NonpositiveDiagonal : public Error {
 public:
  using Error::Error;
};

// No choice of rows of B can give the augmented leading block full rank.
class StructuralDeficiency : public Error {
 public:
  using Error::Error;
};

class RankDeficientB : public Error {
 public:
  using Error::Error;
};

// Z^T A Z is singular, so the saddle-point matrix is singular.
class SingularReducedHessian : public Error {
 public:
  using Error::Error;
};

class IndefiniteOperator : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedField : public Error {
 public:
  using Error::Error;
};

}  // namespace augprec
