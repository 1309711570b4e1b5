#include "dicke/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace dicke::sparse {

void CsrMatrix::multiply(const std::complex<double>* x, std::complex<double>* y) const {
    for (int r = 0; r < rows; ++r) {
        std::complex<double> acc{0.0, 0.0};
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += values[k] * x[col_idx[k]];
        y[r] = acc;
    }
}

void CsrMatrix::multiply(const double* x, double* y) const {
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += values[k] * x[col_idx[k]];
        y[r] = acc;
    }
}

Eigen::VectorXcd CsrMatrix::apply(const Eigen::VectorXcd& x) const {
    if (x.size() != cols) throw InvalidParameterError("CsrMatrix::apply: dimension mismatch");
    Eigen::VectorXcd y(rows);
    multiply(x.data(), y.data());
    return y;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d(r, col_idx[k]) += values[k];
    return d;
}

void CsrMatrix::gershgorin(double& lo, double& hi) const {
    lo = 0.0;
    hi = 0.0;
    bool first = true;
    for (int r = 0; r < rows; ++r) {
        double diag = 0.0, radius = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            if (col_idx[k] == r) diag += values[k];
            else radius += std::abs(values[k]);
        }
        if (first) {
            lo = diag - radius;
            hi = diag + radius;
            first = false;
        } else {
            lo = std::min(lo, diag - radius);
            hi = std::max(hi, diag + radius);
        }
    }
}

CsrMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(rows + 1, 0);
    m.col_idx.reserve(triplets.size());
    m.values.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const int r = triplets[i].row, c = triplets[i].col;
        double v = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
            v += triplets[i++].value;
        if (v == 0.0) continue;
        m.col_idx.push_back(c);
        m.values.push_back(v);
        ++m.row_ptr[r + 1];
    }
    for (int r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    return m;
}

CsrMatrix csr_scaled_sum(const CsrMatrix& a, double sa, const CsrMatrix& b, double sb) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw InvalidParameterError("csr_scaled_sum: shape mismatch");
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.rows; ++r)
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            t.push_back({r, a.col_idx[k], sa * a.values[k]});
    for (int r = 0; r < b.rows; ++r)
        for (int k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k)
            t.push_back({r, b.col_idx[k], sb * b.values[k]});
    return csr_from_triplets(a.rows, a.cols, std::move(t));
}

std::vector<int> connected_components(const CsrMatrix& m, int* n_components) {
    std::vector<int> label(m.rows, -1);
    std::vector<int> stack;
    int next = 0;
    for (int seed = 0; seed < m.rows; ++seed) {
        if (label[seed] >= 0) continue;
        label[seed] = next;
        stack.push_back(seed);
        while (!stack.empty()) {
            const int r = stack.back();
            stack.pop_back();
            for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
                const int c = m.col_idx[k];
                if (c != r && label[c] < 0 && m.values[k] != 0.0) {
                    label[c] = next;
                    stack.push_back(c);
                }
            }
        }
        ++next;
    }
    if (n_components) *n_components = next;
    return label;
}

CsrMatrix csr_submatrix(const CsrMatrix& m, const std::vector<int>& indices) {
    std::vector<int> inverse(m.cols, -1);
    for (std::size_t i = 0; i < indices.size(); ++i) inverse[indices[i]] = static_cast<int>(i);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int r = indices[i];
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            const int c = inverse[m.col_idx[k]];
            if (c >= 0) t.push_back({static_cast<int>(i), c, m.values[k]});
        }
    }
    return csr_from_triplets(static_cast<int>(indices.size()), static_cast<int>(indices.size()),
                             std::move(t));
}

} // namespace dicke::sparse
