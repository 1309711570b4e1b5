// lapack.hpp — thin wrappers over the OpenBLAS-backed LAPACK eigensolvers.

#pragma once

#include <Eigen/Dense>

namespace dicke::la {

// Full eigendecomposition of a real symmetric matrix (dsyevr).
// Eigenvalues ascending in w, eigenvectors in the columns of z.
// The input is taken by value because LAPACK destroys it.
void eigh_real(Eigen::MatrixXd a, Eigen::VectorXd& w, Eigen::MatrixXd& z);

// Eigenvalues only.
Eigen::VectorXd eigvals_real(Eigen::MatrixXd a);

// Number of threads the BLAS backend may use (no-op if unavailable).
void set_blas_threads(int n);

} // namespace dicke::la
