#include "dicke/lapack.hpp"

#include <lapacke.h>

#include <string>

#include "dicke/errors.hpp"

// Present in OpenBLAS; weak so that a reference-BLAS link still works.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace dicke::la {

void eigh_real(Eigen::MatrixXd a, Eigen::VectorXd& w, Eigen::MatrixXd& z) {
    if (a.rows() != a.cols())
        throw InvalidParameterError("eigh_real: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    z.resize(n, n);
    std::vector<lapack_int> isuppz(2 * std::max<lapack_int>(1, n));
    lapack_int m = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, a.data(), n, 0.0, 0.0, 0, 0,
                       0.0, &m, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || m != n)
        throw NumericalError("eigh_real: dsyevr failed (info=" + std::to_string(info) +
                             ", n=" + std::to_string(n) + ")");
}

Eigen::VectorXd eigvals_real(Eigen::MatrixXd a) {
    if (a.rows() != a.cols())
        throw InvalidParameterError("eigvals_real: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0)
        throw NumericalError("eigvals_real: dsyevd failed (info=" + std::to_string(info) + ")");
    return w;
}

void set_blas_threads(int n) {
    if (openblas_set_num_threads) openblas_set_num_threads(n);
}

} // namespace dicke::la
