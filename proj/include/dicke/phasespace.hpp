// phasespace.hpp — Wigner function, symmetric characteristic function, and
// Fock-basis photon distribution of the cavity's reduced state.
//
// Conventions: a phase-space point is alpha = x + i p with unit scale, so a
// coherent state |alpha0> peaks at alpha = alpha0 and integrates to one over
// d(Re alpha) d(Im alpha). The Wigner map is evaluated with the displaced
// parity identity W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dag], which
// equals the Fourier transform of chi(eta) analytically; the Fourier route is
// kept as a cross-check in the tests, not as the production path.

#pragma once

#include <complex>

#include "dicke/hilbert.hpp"

namespace dicke::phasespace {

using hilbert::DensityMatrix;

struct PhaseGrid {
    double x_min = -7.0, x_max = 7.0;
    double p_min = -7.0, p_max = 7.0;
    int nx = 201, np = 201;

    PhaseGrid() = default;
    PhaseGrid(double x_min_, double x_max_, double p_min_, double p_max_, int nx_, int np_);

    double x_at(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
    double p_at(int j) const { return np == 1 ? p_min : p_min + (p_max - p_min) * j / (np - 1); }
    std::complex<double> alpha_at(int i, int j) const { return {x_at(i), p_at(j)}; }
    double cell_area() const;
};

struct WignerMap {
    PhaseGrid grid;
    Eigen::MatrixXd values;        // values(i, j) = W(x_i + i p_j)
    double boundary_max = 0.0;     // max |W| on the grid edge
    bool boundary_warning = false; // extent smaller than the state's support
};

struct PhotonDistribution {
    Eigen::VectorXd probabilities;   // p(n), n = 0..n_max, clamped at -1e-12
};

// chi(eta) = Tr[rho exp(eta a^dag - eta^* a)] via the matrix exponential of
// the anti-Hermitian generator on the truncated basis. If truncation
// artifacts exceed ~1e-6 the optional artifact estimate is set accordingly
// (displaced-state leakage in the top Fock levels).
std::complex<double> characteristic_function(const DensityMatrix& rho_a, std::complex<double> eta,
                                             double* artifact = nullptr);

// Displacement operator D(beta) = exp(beta a^dag - beta^* a) on a truncated
// Fock basis from the closed-form Laguerre matrix elements.
Eigen::MatrixXcd displacement_matrix(int dim, std::complex<double> beta);

// W on the grid via displaced parity; parallel over grid columns.
WignerMap wigner(const DensityMatrix& rho_a, const PhaseGrid& grid, int workers = 1);

// p(n) = <n|rho|n>.
PhotonDistribution photon_distribution(const DensityMatrix& rho_a);

} // namespace dicke::phasespace
