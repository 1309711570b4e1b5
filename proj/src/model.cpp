#include "dicke/model.hpp"

#include <cmath>
#include <string>

namespace dicke::model {

using hilbert::BasisTag;
using hilbert::Matrix;
using hilbert::Vector;

const char* charger_name(ChargerKind kind) {
    switch (kind) {
        case ChargerKind::fock: return "fock";
        case ChargerKind::coherent: return "coherent";
        case ChargerKind::squeezed: return "squeezed";
    }
    return "?";
}

ChargerKind charger_from_name(const std::string& name) {
    if (name == "fock") return ChargerKind::fock;
    if (name == "coherent") return ChargerKind::coherent;
    if (name == "squeezed") return ChargerKind::squeezed;
    throw InvalidParameterError("unknown charger kind '" + name + "'");
}

void ModelParams::validate() const {
    if (n_atoms < 1) throw InvalidParameterError("ModelParams: N must be >= 1");
    if (omega_c <= 0.0) throw InvalidParameterError("ModelParams: omega_c must be positive");
    if (!(omega1 < omega2 && omega2 < omega3))
        throw InvalidParameterError("ModelParams: level energies must satisfy omega1 < omega2 < omega3");
    if (g12 < 0.0 || g23 < 0.0) throw InvalidParameterError("ModelParams: couplings must be >= 0");
    if (n_max == 0 || n_max < -1) throw InvalidParameterError("ModelParams: n_max must be >= 1 or -1 (auto)");
}

int min_n_max_for_tail(ChargerKind kind, int n_atoms) {
    const double mean = 2.0 * n_atoms;
    switch (kind) {
        case ChargerKind::fock:
            return 2 * n_atoms;   // support ends exactly at |2N>
        case ChargerKind::coherent: {
            // Poisson(2N), scan until the remaining tail drops below tolerance
            double p = std::exp(-mean), cum = p;
            int n = 0;
            while (1.0 - cum >= kTailTolerance) {
                ++n;
                p *= mean / n;
                cum += p;
                if (n > 100000) throw NumericalError("min_n_max_for_tail: coherent scan did not converge");
            }
            return n;
        }
        case ChargerKind::squeezed: {
            // p(2m)/p(2m-2) = tanh^2(r) (2m-1)/(2m), sinh^2 r = 2N
            const double tanh2 = mean / (mean + 1.0);
            double p = 1.0 / std::sqrt(mean + 1.0);   // p(0) = 1/cosh r
            double cum = p;
            int m = 0;
            while (1.0 - cum >= kTailTolerance) {
                ++m;
                p *= tanh2 * (2.0 * m - 1.0) / (2.0 * m);
                cum += p;
                if (m > 100000) throw NumericalError("min_n_max_for_tail: squeezed scan did not converge");
            }
            return 2 * m;
        }
    }
    throw InvalidParameterError("min_n_max_for_tail: bad charger kind");
}

int auto_n_max(const ModelParams& params) {
    params.validate();
    const int base = min_n_max_for_tail(params.charger, params.n_atoms);
    // Headroom for coupling-driven spreading beyond the initial support. The
    // interaction acts through (a + a^dag) with collective weight <= g*sqrt(N),
    // so the reachable displacement grows with (g12+g23)*sqrt(N); constants
    // fitted against measured top-level leakage over g in [0,2], N in [1,10].
    const double drive = (params.g12 + params.g23) * std::sqrt(double(params.n_atoms)) / params.omega_c;
    const int headroom = 8 + static_cast<int>(std::ceil(3.0 * drive + 1.2 * drive * drive));
    return base + headroom;
}

int resolve_n_max(const ModelParams& params) {
    return params.n_max >= 1 ? params.n_max : auto_n_max(params);
}

ChargerState charger_state(const ModelParams& params, const CavityBasis& cavity) {
    params.validate();
    const int dim = cavity.dimension();
    const double mean = 2.0 * params.n_atoms;   // <a^dag a> in units of omega_c
    Vector amps = Vector::Zero(dim);
    double captured = 0.0;

    switch (params.charger) {
        case ChargerKind::fock: {
            const int n = 2 * params.n_atoms;
            if (n <= cavity.n_max) {
                amps(n) = 1.0;
                captured = 1.0;
            }
            break;
        }
        case ChargerKind::coherent: {
            const double alpha = std::sqrt(mean);
            double c = std::exp(-mean / 2.0);
            for (int n = 0; n <= cavity.n_max; ++n) {
                if (n > 0) c *= alpha / std::sqrt(double(n));
                amps(n) = c;
                captured += c * c;
            }
            break;
        }
        case ChargerKind::squeezed: {
            // c_{2m} = (tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r), all positive
            const double tanh_r = std::sqrt(mean / (mean + 1.0));
            double c = 1.0 / std::sqrt(std::sqrt(mean + 1.0));   // 1/sqrt(cosh r)
            for (int m = 0; 2 * m <= cavity.n_max; ++m) {
                if (m > 0) c *= tanh_r * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
                amps(2 * m) = c;
                captured += c * c;
            }
            break;
        }
    }

    const double tail = 1.0 - captured;
    if (tail >= kTailTolerance)
        throw TruncationError("charger_state: tail probability above n_max=" +
                              std::to_string(cavity.n_max) + " is " + std::to_string(tail) +
                              " (needs n_max >= " +
                              std::to_string(min_n_max_for_tail(params.charger, params.n_atoms)) + ")");
    amps /= amps.norm();
    return ChargerState{params.charger, std::move(amps)};
}

JointState initial_joint_state(const ModelParams& params, const CavityBasis& cavity,
                               const AtomBasis& atoms) {
    ChargerState charger = charger_state(params, cavity);
    const int da = atoms.dimension();
    Vector amps = Vector::Zero(Eigen::Index(cavity.dimension()) * da);
    for (int n = 0; n < cavity.dimension(); ++n)
        amps(Eigen::Index(n) * da) = charger.amps(n);   // config 0 is (N,0,0)
    return JointState(std::move(amps), cavity.dimension(), da);
}

JointState initial_joint_state(const ModelParams& params) {
    CavityBasis cavity(resolve_n_max(params));
    AtomBasis atoms = hilbert::enumerate_atom_basis(params.n_atoms);
    return initial_joint_state(params, cavity, atoms);
}

Operator battery_hamiltonian(const ModelParams& params, const AtomBasis& atoms) {
    const int dim = atoms.dimension();
    Matrix m = Matrix::Zero(dim, dim);
    for (int a = 0; a < dim; ++a) {
        const auto& c = atoms.configs[a];
        m(a, a) = params.omega1 * c.n1 + params.omega2 * c.n2 + params.omega3 * c.n3;
    }
    return Operator(std::move(m), BasisTag::atom);
}

Hamiltonians build_hamiltonians(const ModelParams& params, const CavityBasis& cavity,
                                const AtomBasis& atoms) {
    params.validate();
    if (atoms.n_atoms != params.n_atoms)
        throw InvalidParameterError("build_hamiltonians: atom basis does not match params.N");
    if (params.n_max >= 1 && cavity.n_max != params.n_max)
        throw InvalidParameterError("build_hamiltonians: cavity basis does not match params.n_max");

    const Operator a_op = hilbert::annihilator(cavity);
    const Operator id_c = hilbert::identity(BasisTag::cavity, cavity.dimension());
    const Operator id_a = hilbert::identity(BasisTag::atom, atoms.dimension());
    const Matrix x = a_op.mat + a_op.mat.adjoint();

    Hamiltonians h;
    h.h_charger = hilbert::tensor(
        Operator(params.omega_c * (a_op.mat.adjoint() * a_op.mat).eval(), BasisTag::cavity), id_a);
    h.h_battery = hilbert::tensor(id_c, battery_hamiltonian(params, atoms));

    const double scale = 1.0 / std::sqrt(double(params.n_atoms));
    const Matrix s12 = hilbert::collective_op(1, 2, atoms).mat + hilbert::collective_op(2, 1, atoms).mat;
    const Matrix s23 = hilbert::collective_op(2, 3, atoms).mat + hilbert::collective_op(3, 2, atoms).mat;
    h.h_interaction = Operator(
        params.g12 * scale * hilbert::tensor(Operator(x, BasisTag::cavity), Operator(s12, BasisTag::atom)).mat +
            params.g23 * scale * hilbert::tensor(Operator(x, BasisTag::cavity), Operator(s23, BasisTag::atom)).mat,
        BasisTag::joint);

    h.h_total = Operator(h.h_charger.mat + h.h_battery.mat + h.h_interaction.mat, BasisTag::joint);
    return h;
}

namespace {

// Triplets of (1/sqrt(N)) (a^dag + a) (x) S for a real symmetric atomic S;
// entries couple photon numbers n and n+1 only.
std::vector<sparse::Triplet> coupling_triplets(const Matrix& s, int cavity_dim, int n_atoms) {
    const int da = static_cast<int>(s.rows());
    const double scale = 1.0 / std::sqrt(double(n_atoms));
    std::vector<sparse::Triplet> t;
    for (int n = 0; n + 1 < cavity_dim; ++n) {
        const double xv = std::sqrt(double(n + 1)) * scale;
        for (int a = 0; a < da; ++a)
            for (int b = 0; b < da; ++b) {
                const double sv = s(a, b).real();
                if (sv == 0.0) continue;
                t.push_back({n * da + a, (n + 1) * da + b, xv * sv});
                t.push_back({(n + 1) * da + a, n * da + b, xv * sv});
            }
    }
    return t;
}

} // namespace

HamiltonianParts build_hamiltonian_parts(const ModelParams& params, const CavityBasis& cavity,
                                         const AtomBasis& atoms) {
    params.validate();
    if (atoms.n_atoms != params.n_atoms)
        throw InvalidParameterError("build_hamiltonian_parts: atom basis does not match params.N");
    const int dc = cavity.dimension(), da = atoms.dimension();
    const int dim = dc * da;

    std::vector<sparse::Triplet> diag;
    diag.reserve(dim);
    for (int n = 0; n < dc; ++n)
        for (int a = 0; a < da; ++a) {
            const auto& c = atoms.configs[a];
            const double e = params.omega_c * n + params.omega1 * c.n1 + params.omega2 * c.n2 +
                             params.omega3 * c.n3;
            diag.push_back({n * da + a, n * da + a, e});
        }

    const Matrix s12 = hilbert::collective_op(1, 2, atoms).mat + hilbert::collective_op(2, 1, atoms).mat;
    const Matrix s23 = hilbert::collective_op(2, 3, atoms).mat + hilbert::collective_op(3, 2, atoms).mat;

    HamiltonianParts parts;
    parts.diagonal = sparse::csr_from_triplets(dim, dim, std::move(diag));
    parts.k12 = sparse::csr_from_triplets(dim, dim, coupling_triplets(s12, dc, params.n_atoms));
    parts.k23 = sparse::csr_from_triplets(dim, dim, coupling_triplets(s23, dc, params.n_atoms));
    return parts;
}

sparse::CsrMatrix HamiltonianParts::assemble(double g12, double g23) const {
    sparse::CsrMatrix h = sparse::csr_scaled_sum(diagonal, 1.0, k12, g12);
    return sparse::csr_scaled_sum(h, 1.0, k23, g23);
}

sparse::CsrMatrix build_sparse_hamiltonian(const ModelParams& params, const CavityBasis& cavity,
                                           const AtomBasis& atoms) {
    return build_hamiltonian_parts(params, cavity, atoms).assemble(params.g12, params.g23);
}

} // namespace dicke::model
