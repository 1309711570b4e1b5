// groundstate.hpp — ground-state energy of the coupled Hamiltonian across the
// coupling plane and the normal/superradiant classification. The decoupled
// product state has energy zero, so E_g <= 0 variationally; a superradiant
// point is one with E_g below the classification tolerance.

#pragma once

#include <vector>

#include "dicke/model.hpp"
#include "dicke/sparse.hpp"

namespace dicke::groundstate {

// E_g > -epsilon_phase means normal.
inline constexpr double kPhaseEpsilon = 1e-6;

enum class Phase { normal, superradiant };

const char* phase_name(Phase p);

struct PhasePoint {
    double g12 = 0.0;
    double g23 = 0.0;
    double ground_energy = 0.0;   // hbar*omega_c
    Phase phase = Phase::normal;
};

struct SolveOptions {
    double tol = 1e-9;            // Ritz residual, relative to the spectral scale
    int max_basis = 220;          // Lanczos vectors per restart cycle
    int max_restarts = 40;
    int dense_below = 2000;       // joint dimensions below this use the dense solver
    int n_max_start = 16;         // adaptive cutoff start (doubled until converged)
    int n_max_limit = 4096;
    double cutoff_tol = 1e-7;     // |E_g(n_max) - E_g(2 n_max)| convergence gate
};

struct SolveDiagnostics {
    int iterations = 0;
    int restarts = 0;
    double residual = 0.0;
    int n_max_used = 0;
    bool dense_path = false;
};

// Smallest eigenvalue by restarted Lanczos with full reorthogonalization.
// Deterministic start vector; NumericalError with iteration diagnostics on
// non-convergence.
double smallest_eigenvalue(const sparse::CsrMatrix& h, const SolveOptions& opts = {},
                           SolveDiagnostics* diag = nullptr);

// E_g at the params' couplings, with the photon cutoff raised until the
// doubling test passes. Ignores the charger kind.
PhasePoint ground_energy(const model::ModelParams& params, const SolveOptions& opts = {},
                         SolveDiagnostics* diag = nullptr);

// Row-major grid over [g12_range] x [g23_range]; per-point failures are not
// tolerated here (callers that need to continue catch per point).
std::vector<PhasePoint> phase_scan(double g12_min, double g12_max, double g23_min, double g23_max,
                                   int resolution, const model::ModelParams& base,
                                   const SolveOptions& opts = {});

} // namespace dicke::groundstate
