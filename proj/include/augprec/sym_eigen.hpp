#pragma once

#include "augprec/dense_matrix.hpp"

namespace augprec {

inline constexpr Index kEigenDimensionCap = 1000;

struct SymEigen {
  Vector values;        // ascending
  DenseMatrix vectors;  // column j pairs with values[j]
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
// 1e-14 * ||M||_F (or stops decreasing). Throws InvalidArgument above
// kEigenDimensionCap.
SymEigen sym_eigen(const DenseMatrix& m);
Vector sym_eigenvalues(const DenseMatrix& m);

}  // namespace augprec
