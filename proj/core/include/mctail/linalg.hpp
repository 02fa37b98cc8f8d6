#pragma once

#include <Eigen/Dense>

namespace mctail::linalg {

// Eigendecomposition of a real symmetric matrix. `values` are sorted in
// descending order; column i of `vectors` is the eigenvector for values[i].
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Cyclic Jacobi rotations. Terminates when the Frobenius norm of the
// off-diagonal part drops below off_tol * max(1, ||A||_F); throws
// errc::numerical_failure if max_sweeps is exhausted first. The input is
// symmetrized as (A + A^T)/2 before iterating, so 1-ulp asymmetry from
// upstream matrix products is harmless.
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double off_tol = 1e-13, int max_sweeps = 100);

// Invariant distribution of a row-stochastic kernel by power iteration on
// the transpose of the half-lazy kernel (P + I)/2; the laziness removes
// periodicity without changing the fixed point. Converges when
// ||mu P - mu||_inf <= residual_tol on the original kernel.
Eigen::VectorXd stationary_power(const Eigen::MatrixXd& kernel, double residual_tol = 1e-12,
                                 int max_iters = 200000);

}  // namespace mctail::linalg
