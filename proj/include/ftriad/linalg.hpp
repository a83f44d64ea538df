#pragma once

#include <vector>

#include "ftriad/tensor.hpp"

namespace ftriad {

// Singular values of a 2-index tensor, descending (one-sided Jacobi).
std::vector<double> singular_values(const Tensor& m);

// Number of singular values above rank_cutoff times the largest one; 0 for
// the zero matrix.  Requires exactly 2 indices.
std::size_t numeric_rank(const Tensor& m, const ToleranceConfig& tol);

// sigma_min / sigma_max (0 when the matrix is zero).
double rcond(const Tensor& m);

// Matrix product of 2-index tensors in the mathematical convention
// M[row, col]: (a*b)[i,k] = sum_j a[i,j] b[j,k].
Tensor mat_mul(const Tensor& a, const Tensor& b);

// Determinant of a square 2-index tensor (partial-pivot LU).
Scalar mat_det(const Tensor& m);

// Inverse of a square 2-index tensor (Gauss-Jordan with partial pivoting).
// Throws SingularMatrix if a pivot vanishes.
Tensor mat_inverse(const Tensor& m);

// Solves the square system A x = b.
Tensor solve_linear(const Tensor& a, const Tensor& b);

// Least-squares solution of the tall system A x = b via normal equations
// (A is size m x n with m >= n, n small).
Tensor solve_least_squares(const Tensor& a, const Tensor& b);

// Pivoted factorization F = P * L * D * U * P' of an invertible 3x3 matrix:
// P, P' permutation matrices, L/U unit-triangular, D diagonal.  Pivots are
// chosen greedily (largest magnitude in the trailing block, ties to the
// smallest row-major position).
struct LduFactors {
  Tensor p;   // left permutation
  Tensor l;   // unit lower-triangular
  Tensor d;   // diagonal
  Tensor u;   // unit upper-triangular
  Tensor pp;  // right permutation
};
LduFactors ldu_decompose(const Tensor& f, const ToleranceConfig& tol);

}  // namespace ftriad
