// sparse.hpp — real CSR matrix for the joint Hamiltonian plus small helpers.
// All model Hamiltonians are real symmetric in the product basis, so values
// are stored as doubles and applied to complex vectors.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke::sparse {

struct Triplet {
    int row = 0, col = 0;
    double value = 0.0;
};

struct CsrMatrix {
    int rows = 0, cols = 0;
    std::vector<int> row_ptr;    // rows+1
    std::vector<int> col_idx;    // nnz, ascending within each row
    std::vector<double> values;  // nnz

    std::size_t nnz() const { return values.size(); }

    // y = A x
    void multiply(const std::complex<double>* x, std::complex<double>* y) const;
    void multiply(const double* x, double* y) const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

    Eigen::MatrixXd to_dense() const;

    // Gershgorin bound on the spectral interval [lo, hi].
    void gershgorin(double& lo, double& hi) const;
};

// Duplicate (row, col) entries are summed; result rows are sorted.
CsrMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets);

// A + diagonal shift, same pattern plus missing diagonal entries.
CsrMatrix csr_scaled_sum(const CsrMatrix& a, double sa, const CsrMatrix& b, double sb);

// Connected components of the symmetric sparsity graph (diagonal ignored).
// Returns a label in [0, n_components) per index.
std::vector<int> connected_components(const CsrMatrix& m, int* n_components);

// Rows/cols restricted to the given (sorted) index subset.
CsrMatrix csr_submatrix(const CsrMatrix& m, const std::vector<int>& indices);

} // namespace dicke::sparse
