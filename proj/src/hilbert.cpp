#include "dicke/hilbert.hpp"

#include <cmath>
#include <string>

namespace dicke::hilbert {

const char* basis_name(BasisTag tag) {
    switch (tag) {
        case BasisTag::cavity: return "cavity";
        case BasisTag::atom: return "atom";
        case BasisTag::joint: return "joint";
    }
    return "?";
}

AtomBasis enumerate_atom_basis(int n_atoms) {
    if (n_atoms < 1)
        throw InvalidParameterError("enumerate_atom_basis: N must be >= 1, got " +
                                    std::to_string(n_atoms));
    AtomBasis basis;
    basis.n_atoms = n_atoms;
    basis.configs.reserve((n_atoms + 1) * (n_atoms + 2) / 2);
    for (int n1 = n_atoms; n1 >= 0; --n1)
        for (int n2 = n_atoms - n1; n2 >= 0; --n2)
            basis.configs.push_back({n1, n2, n_atoms - n1 - n2});
    return basis;
}

int AtomBasis::index_of(const AtomConfig& c) const {
    if (c.n1 < 0 || c.n2 < 0 || c.n3 < 0 || c.n1 + c.n2 + c.n3 != n_atoms)
        throw InvalidParameterError("AtomBasis::index_of: occupations do not sum to N");
    const int k = n_atoms - c.n1;   // configs with larger n1 come first
    return k * (k + 1) / 2 + (k - c.n2);
}

bool is_hermitian(const Matrix& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator identity(BasisTag tag, int dim) {
    if (dim < 1) throw InvalidParameterError("identity: dimension must be >= 1");
    return Operator(Matrix::Identity(dim, dim), tag);
}

Operator collective_op(int i, int j, const AtomBasis& basis) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw InvalidParameterError("collective_op: level indices must be in {1,2,3}");
    const int dim = basis.dimension();
    Matrix m = Matrix::Zero(dim, dim);
    auto occ = [](const AtomConfig& c, int level) {
        return level == 1 ? c.n1 : (level == 2 ? c.n2 : c.n3);
    };
    for (int col = 0; col < dim; ++col) {
        const AtomConfig& c = basis.configs[col];
        if (i == j) {
            m(col, col) = static_cast<double>(occ(c, i));
            continue;
        }
        const int nj = occ(c, j);
        if (nj == 0) continue;
        AtomConfig dst = c;
        auto bump = [&](int level, int delta) {
            if (level == 1) dst.n1 += delta;
            else if (level == 2) dst.n2 += delta;
            else dst.n3 += delta;
        };
        bump(j, -1);
        bump(i, +1);
        const int ni = occ(c, i);
        m(basis.index_of(dst), col) = std::sqrt(double(ni + 1) * double(nj));
    }
    return Operator(std::move(m), BasisTag::atom);
}

Operator annihilator(const CavityBasis& basis) {
    const int dim = basis.dimension();
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(double(n));
    return Operator(std::move(m), BasisTag::cavity);
}

Operator tensor(const Operator& cavity_op, const Operator& atom_op) {
    if (cavity_op.basis != BasisTag::cavity || atom_op.basis != BasisTag::atom)
        throw InvalidParameterError(std::string("tensor: expected (cavity, atom) operands, got (") +
                                    basis_name(cavity_op.basis) + ", " + basis_name(atom_op.basis) + ")");
    const Eigen::Index dc = cavity_op.dim(), da = atom_op.dim();
    Matrix m(dc * da, dc * da);
    for (Eigen::Index n = 0; n < dc; ++n)
        for (Eigen::Index np = 0; np < dc; ++np)
            m.block(n * da, np * da, da, da) = cavity_op.mat(n, np) * atom_op.mat;
    return Operator(std::move(m), BasisTag::joint);
}

JointState::JointState(Vector a, int cav_dim, int at_dim)
    : amps(std::move(a)), cavity_dim(cav_dim), atom_dim(at_dim) {
    if (amps.size() != Eigen::Index(cav_dim) * at_dim)
        throw InvalidParameterError("JointState: amplitude length does not match cavity_dim*atom_dim");
}

DensityMatrix::DensityMatrix(Matrix m, BasisTag tag) : mat(std::move(m)), basis(tag) {
    if (mat.rows() != mat.cols())
        throw InvalidParameterError("DensityMatrix: matrix must be square");
}

void validate_density(const DensityMatrix& rho, double trace_tol, double psd_tol, double herm_tol) {
    if (std::abs(rho.mat.trace().real() - 1.0) > trace_tol ||
        std::abs(rho.mat.trace().imag()) > trace_tol)
        throw InvalidStateError("density matrix trace deviates from 1");
    if (!is_hermitian(rho.mat, herm_tol))
        throw InvalidStateError("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("validate_density: eigensolver failed");
    if (es.eigenvalues().minCoeff() < -psd_tol)
        throw InvalidStateError("density matrix has a negative eigenvalue");
}

DensityMatrix partial_trace(const JointState& state, BasisTag keep) {
    if (keep != BasisTag::atom && keep != BasisTag::cavity)
        throw InvalidParameterError("partial_trace: keep must be atom or cavity");
    if (std::abs(state.norm() - 1.0) > 1e-6)
        throw StaleStateError("partial_trace: state norm deviates from 1 by more than 1e-6");
    const int dc = state.cavity_dim, da = state.atom_dim;
    // View amplitudes as the da x dc matrix M(a, n) = psi[n*da + a].
    Eigen::Map<const Matrix> m(state.amps.data(), da, dc);
    if (keep == BasisTag::atom) {
        // rho_B[a,b] = sum_n psi[n,a] conj(psi[n,b])
        return DensityMatrix(m * m.adjoint(), BasisTag::atom);
    }
    // rho_A[n,m] = sum_a psi[n,a] conj(psi[m,a]) = transpose(M^dag M)
    return DensityMatrix((m.adjoint() * m).transpose(), BasisTag::cavity);
}

} // namespace dicke::hilbert
