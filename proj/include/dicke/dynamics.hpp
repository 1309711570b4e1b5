// dynamics.hpp — closed-system propagation |psi(t)> = exp(-iHt) |psi(0)> on a
// uniform sample grid, by two independent methods that cross-validate:
//
//   spectral — one full Hermitian eigendecomposition, then exact phase
//              evolution at every sample. Reference method. Real-symmetric
//              Hamiltonians are split into the connected components of their
//              sparsity graph (for this model: the photon-parity sectors) and
//              each active block is diagonalized with LAPACK.
//   krylov   — short-iterative Lanczos with a per-step residual estimate;
//              steps are subdivided until the estimate is below tolerance.
//              Scales to joint dimensions far beyond the dense solver.
//
// Both methods enforce the truncation gate: population in the top three Fock
// levels must stay below the leak tolerance at every sample, otherwise a
// TruncationError aborts the run.

#pragma once

#include <functional>
#include <vector>

#include "dicke/hilbert.hpp"
#include "dicke/sparse.hpp"

namespace dicke::dynamics {

using hilbert::JointState;
using hilbert::Operator;

struct TimeGrid {
    double t_end = 20.0;
    int n_samples = 2001;

    TimeGrid() = default;
    TimeGrid(double t_end_, int n_samples_);

    double spacing() const { return t_end / (n_samples - 1); }
    double sample(int i) const { return t_end * double(i) / double(n_samples - 1); }
    std::vector<double> samples() const;
};

struct StateTrajectory {
    TimeGrid grid;
    std::vector<JointState> states;
};

// Cavity-major layout of a joint amplitude vector.
struct JointLayout {
    int cavity_dim = 0;
    int atom_dim = 0;

    Eigen::Index dim() const { return Eigen::Index(cavity_dim) * atom_dim; }
};

struct PropagationOptions {
    bool truncation_check = true;
    double leak_tol = 1e-6;          // top-3 Fock population gate
    int krylov_dim = 30;
    double dt = -1.0;                // krylov substep; <= 0 chooses from the spectral width
    double step_tol = 1e-10;         // krylov per-step residual gate
    int max_dense_dim = 16000;       // refuse dense eigendecomposition above this
};

struct PropagationDiagnostics {
    double max_norm_error = 0.0;     // max over samples of | ||psi|| - 1 |
    double max_leak = 0.0;           // max over samples of top-3 Fock population
    long steps = 0;                  // krylov substeps taken
    long subdivisions = 0;           // krylov step halvings forced by the residual gate
    long matvecs = 0;
    int components_active = 0;       // sparsity-graph components carrying amplitude
    int component_dim_max = 0;
};

// Called once per sample, in increasing sample order, with the full-layout state.
using SampleVisitor = std::function<void(int sample_index, double t, const Eigen::VectorXcd& psi)>;

// ----------------------------- spec-level API --------------------------------

StateTrajectory propagate_spectral(const Operator& h, const JointState& psi0, const TimeGrid& grid,
                                   const PropagationOptions& opts = {},
                                   PropagationDiagnostics* diag = nullptr);

StateTrajectory propagate_krylov(const Operator& h, const JointState& psi0, const TimeGrid& grid,
                                 int krylov_dim, double dt, const PropagationOptions& opts = {},
                                 PropagationDiagnostics* diag = nullptr);

// ----------------------------- streaming API ---------------------------------
// Large runs stream samples instead of materializing the trajectory.

void propagate_spectral_sparse(const sparse::CsrMatrix& h, const Eigen::VectorXcd& psi0,
                               const TimeGrid& grid, const JointLayout& layout,
                               const PropagationOptions& opts, const SampleVisitor& visit,
                               PropagationDiagnostics* diag = nullptr);

void propagate_krylov_sparse(const sparse::CsrMatrix& h, const Eigen::VectorXcd& psi0,
                             const TimeGrid& grid, const JointLayout& layout,
                             const PropagationOptions& opts, const SampleVisitor& visit,
                             PropagationDiagnostics* diag = nullptr);

// Top-3 Fock-level population of a cavity-major joint vector.
double truncation_leak(const Eigen::VectorXcd& psi, const JointLayout& layout);

} // namespace dicke::dynamics
