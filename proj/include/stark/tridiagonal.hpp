// Lowest eigenpairs of a real symmetric tridiagonal matrix.

#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace stark {

struct TridiagonalEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // one normalized eigenvector per column
};

// diagonal.size() == n, off_diagonal.size() == n - 1. Returns the lowest
// min(count, n) eigenpairs (LAPACK dstevr, MRRR). Throws NonConvergence on
// a LAPACK failure.
TridiagonalEigen lowest_tridiagonal_eigenpairs(const Eigen::VectorXd& diagonal,
                                               const Eigen::VectorXd& off_diagonal,
                                               std::size_t count, bool want_vectors = true);

}  // namespace stark
