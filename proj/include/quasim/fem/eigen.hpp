#pragma once

#include <vector>

#include "quasim/linalg/matrix.hpp"

namespace quasim::fem {

using linalg::Matrix;

struct JacobiOptions {
  int max_sweeps = 100;
  /// Converged when the off-diagonal Frobenius norm is at most
  /// tolerance * ||A||_F.
  double tolerance = 1e-12;
};

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i pairs with values[i]; orthonormal
  int sweeps = 0;
};

/// Cyclic Jacobi with threshold sweeps for a real symmetric matrix. Each
/// eigenvector is signed so its largest-magnitude component is positive.
/// Throws NumericalError if `max_sweeps` is exhausted.
SymmetricEigen jacobi_eigen(const Matrix& a, const JacobiOptions& options = {});

/// Lower-triangular L with A = L L^T. Throws NumericalError when A is not
/// positive definite.
Matrix cholesky(const Matrix& a);

/// Solves L X = B for lower-triangular L.
Matrix forward_substitute(const Matrix& lower, const Matrix& b);

/// Solves L^T X = B for lower-triangular L.
Matrix backward_substitute_transposed(const Matrix& lower, const Matrix& b);

}  // namespace quasim::fem
