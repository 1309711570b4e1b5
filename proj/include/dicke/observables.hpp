// observables.hpp — energetic and entropic figures of merit of the battery:
// stored energy, ergotropy and locked (passive) energy, average charging
// powers, von Neumann entanglement entropy in bits, and the ergotropy/energy
// ratio, plus the trajectory reductions (maxima, entropies at maxima, ratios).

#pragma once

#include <vector>

#include "dicke/hilbert.hpp"

namespace dicke::observables {

using hilbert::DensityMatrix;
using hilbert::JointState;
using hilbert::Operator;

// All scalars at one sample time.
struct ObservableRecord {
    double t = 0.0;
    double e_stored = 0.0;      // Tr[H_B rho_B]
    double ergotropy = 0.0;     // unitarily extractable work
    double e_locked = 0.0;      // passive-state energy, e_stored - ergotropy
    double p_stored = 0.0;      // e_stored / t   (0 at t = 0)
    double p_ergotropy = 0.0;   // ergotropy / t  (0 at t = 0)
    double entropy_bits = 0.0;  // von Neumann entropy of rho_B, log base 2
    double ratio = 0.0;         // ergotropy / e_stored (0 when the battery is empty)
};

// Grid maxima with earliest-time tie-breaking, entropies at the energy and
// power maxima, and the two derived ratios.
struct TrajectorySummary {
    double e_max = 0.0, t_e = 0.0;
    double ergo_max = 0.0, t_ergo = 0.0;
    double p_max = 0.0, t_p = 0.0;
    double pergo_max = 0.0, t_pergo = 0.0;
    double s_at_t_e = 0.0;
    double s_at_t_p = 0.0;
    double ratio_e = 0.0;   // ergo_max / e_max
    double ratio_p = 0.0;   // pergo_max / p_max
};

// Tr[H_B rho_B]; dimensions and basis tags must match.
double stored_energy(const DensityMatrix& rho_b, const Operator& h_b);

struct ErgotropyResult {
    double ergotropy = 0.0;
    double locked = 0.0;
};

// Spectra of rho (descending) and H (ascending) paired term by term give the
// passive energy; the remainder of Tr[H rho] is extractable.
// Throws InvalidStateError if rho has an eigenvalue below -1e-8.
ErgotropyResult ergotropy(const DensityMatrix& rho_b, const Operator& h_b);

// -sum p log2 p over eigenvalues p > 1e-14.
double entropy_bits(const DensityMatrix& rho);

// All scalars for one sample: reduces the joint state to rho_B internally.
ObservableRecord record(double t, const JointState& state, const Operator& h_b_atomic);

// Reduction over a non-empty trajectory of records.
TrajectorySummary summarize(const std::vector<ObservableRecord>& records);

} // namespace dicke::observables
