// hilbert.hpp — truncated cavity Fock space, permutation-symmetric three-level
// atomic subspace, collective operators, tensor products, partial traces.
//
// The N-atom sector is encoded by occupation triples (n1,n2,n3) with
// n1+n2+n3 = N (Schwinger representation), which reduces the atomic dimension
// from 3^N to (N+1)(N+2)/2. Joint states are stored cavity-major: the photon
// index is the outer (slow) index, the atom configuration the inner one.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke::hilbert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class BasisTag { cavity, atom, joint };

const char* basis_name(BasisTag tag);

// ----------------------------- bases ----------------------------------------

// Fock states n = 0..n_max.
struct CavityBasis {
    int n_max = 0;

    explicit CavityBasis(int n_max_) : n_max(n_max_) {
        if (n_max < 1) throw InvalidParameterError("CavityBasis: n_max must be >= 1");
    }
    int dimension() const { return n_max + 1; }
};

// Occupations of the three atomic levels; n1+n2+n3 = N.
struct AtomConfig {
    int n1 = 0, n2 = 0, n3 = 0;

    bool operator==(const AtomConfig&) const = default;
};

// All (n1,n2,n3) with fixed total N, ordered with (N,0,0) first:
// n1 descending, then n2 descending. The order is part of the on-disk and
// in-memory contract; do not change it.
struct AtomBasis {
    int n_atoms = 0;
    std::vector<AtomConfig> configs;

    int dimension() const { return static_cast<int>(configs.size()); }

    // O(1) index arithmetic; inverse of the enumeration order.
    int index_of(const AtomConfig& c) const;
};

AtomBasis enumerate_atom_basis(int n_atoms);

// ----------------------------- operators ------------------------------------

struct Operator {
    Matrix mat;
    BasisTag basis = BasisTag::joint;

    Operator() = default;
    Operator(Matrix m, BasisTag tag) : mat(std::move(m)), basis(tag) {
        if (mat.rows() != mat.cols())
            throw InvalidParameterError("Operator: matrix must be square");
    }
    Eigen::Index dim() const { return mat.rows(); }

    Operator adjoint() const { return Operator(mat.adjoint(), basis); }
};

bool is_hermitian(const Matrix& m, double tol = 1e-12);

// Identity on a tagged basis of the given dimension.
Operator identity(BasisTag tag, int dim);

// Collective operator A_ij = b_i^dag b_j restricted to total occupation N:
//   A_ij (..,n_i,..,n_j,..) -> sqrt((n_i+1) n_j) (..,n_i+1,..,n_j-1,..), i != j
//   A_ii diagonal with entry n_i.
// Satisfies (A_ij)^dag = A_ji exactly and [A_12,A_21] = A_11 - A_22.
Operator collective_op(int i, int j, const AtomBasis& basis);

// a |n> = sqrt(n) |n-1>; the creator is annihilator(b).adjoint().
Operator annihilator(const CavityBasis& basis);

// Kronecker product consistent with the cavity-major joint index n*dimA + a.
Operator tensor(const Operator& cavity_op, const Operator& atom_op);

// ----------------------------- states ---------------------------------------

// Normalized amplitude vector on the cavity (x) atom product basis,
// index = photon * atom_dim + config.
struct JointState {
    Vector amps;
    int cavity_dim = 0;
    int atom_dim = 0;

    JointState() = default;
    JointState(Vector a, int cav_dim, int at_dim);

    Eigen::Index dim() const { return amps.size(); }
    double norm() const { return amps.norm(); }
    Complex& at(int photon, int config) { return amps(photon * atom_dim + config); }
    Complex at(int photon, int config) const { return amps(photon * atom_dim + config); }
};

// Hermitian, PSD, unit-trace matrix on a single tagged basis.
struct DensityMatrix {
    Matrix mat;
    BasisTag basis = BasisTag::atom;

    DensityMatrix() = default;
    DensityMatrix(Matrix m, BasisTag tag);

    Eigen::Index dim() const { return mat.rows(); }
    double trace_real() const { return mat.trace().real(); }
};

// Checks the DensityMatrix invariants; throws InvalidStateError on violation.
void validate_density(const DensityMatrix& rho, double trace_tol = 1e-10,
                      double psd_tol = 1e-10, double herm_tol = 1e-12);

// Reduced state of the kept subsystem: keep = atom -> rho_B, cavity -> rho_A.
// The input must be normalized to within 1e-6 or a StaleStateError is thrown.
DensityMatrix partial_trace(const JointState& state, BasisTag keep);

} // namespace dicke::hilbert
