// model.hpp — battery/charger/interaction Hamiltonians and the three
// equal-energy initial charger states (Fock, coherent, squeezed vacuum),
// all carrying input energy 2*N*omega_c.
//
// Units: hbar = 1, omega_c = 1; energies in hbar*omega_c, times in 1/omega_c.

#pragma once

#include <string>

#include "dicke/hilbert.hpp"
#include "dicke/sparse.hpp"

namespace dicke::model {

using hilbert::AtomBasis;
using hilbert::CavityBasis;
using hilbert::JointState;
using hilbert::Operator;

enum class ChargerKind { fock, coherent, squeezed };

const char* charger_name(ChargerKind kind);
ChargerKind charger_from_name(const std::string& name);

struct ModelParams {
    int n_atoms = 6;
    double omega_c = 1.0;
    double omega1 = 0.0;
    double omega2 = 1.0;
    double omega3 = 1.95;
    double g12 = 1.0;
    double g23 = 1.0;
    int n_max = -1;                             // photon cutoff; -1 = choose automatically
    ChargerKind charger = ChargerKind::coherent;

    double input_energy() const { return 2.0 * n_atoms * omega_c; }
    void validate() const;
};

// Tolerance on the initial charger's tail probability above n_max.
inline constexpr double kTailTolerance = 1e-10;
// Population allowed in the top three Fock levels after any propagation step.
inline constexpr double kLeakTolerance = 1e-6;

// Smallest n_max whose analytic tail probability is below kTailTolerance.
int min_n_max_for_tail(ChargerKind kind, int n_atoms);

// Default cutoff: tail rule plus headroom for coupling-driven spreading.
int auto_n_max(const ModelParams& params);

// Cutoff from params (auto if n_max < 0).
int resolve_n_max(const ModelParams& params);

struct ChargerState {
    ChargerKind kind = ChargerKind::fock;
    Eigen::VectorXcd amps;   // on the cavity basis
};

// Charger with mean energy omega_c <a^dag a> = 2 N omega_c:
//   fock     -> |2N>
//   coherent -> |alpha>, alpha = sqrt(2N) real positive
//   squeezed -> squeezed vacuum, sinh^2 r = 2N, even-photon support only
// Throws TruncationError if the tail above n_max exceeds kTailTolerance.
ChargerState charger_state(const ModelParams& params, const CavityBasis& cavity);

// charger (x) all atoms in level |1>, i.e. atomic configuration (N,0,0).
JointState initial_joint_state(const ModelParams& params);
JointState initial_joint_state(const ModelParams& params, const CavityBasis& cavity,
                               const AtomBasis& atoms);

struct Hamiltonians {
    Operator h_charger;      // omega_c a^dag a (x) 1
    Operator h_battery;      // 1 (x) sum_i omega_i A_ii
    Operator h_interaction;  // (g12/sqrt(N)) (a^dag + a)(A_12 + A_21) + (g23/sqrt(N)) (a^dag + a)(A_23 + A_32)
    Operator h_total;        // sum of the three (charging window, coupling on)
};

// Dense joint-basis operators; intended for joint dimensions up to a few
// thousand. Large runs assemble the CSR form below instead.
Hamiltonians build_hamiltonians(const ModelParams& params, const CavityBasis& cavity,
                                const AtomBasis& atoms);

// H_B on the atom basis alone (diagonal); the observable module's reference.
Operator battery_hamiltonian(const ModelParams& params, const AtomBasis& atoms);

// Full H as real CSR on the joint basis, never materializing a dense matrix.
sparse::CsrMatrix build_sparse_hamiltonian(const ModelParams& params, const CavityBasis& cavity,
                                           const AtomBasis& atoms);

// Coupling-independent pieces for sweeps: H = diag + g12*k12 + g23*k23.
struct HamiltonianParts {
    sparse::CsrMatrix diagonal;  // H_A + H_B
    sparse::CsrMatrix k12;       // (1/sqrt(N)) (a^dag + a)(A_12 + A_21)
    sparse::CsrMatrix k23;       // (1/sqrt(N)) (a^dag + a)(A_23 + A_32)

    sparse::CsrMatrix assemble(double g12, double g23) const;
};

HamiltonianParts build_hamiltonian_parts(const ModelParams& params, const CavityBasis& cavity,
                                         const AtomBasis& atoms);

} // namespace dicke::model
