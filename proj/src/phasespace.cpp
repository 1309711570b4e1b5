#include "dicke/phasespace.hpp"

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace dicke::phasespace {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// Laguerre arguments above this overflow the scaled recurrence in doubles.
constexpr double kMaxLaguerreArg = 1300.0;

void require_cavity(const DensityMatrix& rho, const char* who) {
    if (rho.basis != hilbert::BasisTag::cavity)
        throw InvalidParameterError(std::string(who) + ": expected a cavity-basis density matrix");
}

// Tr[rho D(-2 alpha) P] accumulated diagonal by diagonal; the conjugate pair
// of each off-diagonal term is folded into a factor 2 Re(.).
double displaced_parity_overlap(const MatrixXcd& rho, Complex alpha) {
    const int dim = static_cast<int>(rho.rows());
    const Complex beta = -2.0 * alpha;
    const double x = std::norm(beta);
    if (x > kMaxLaguerreArg)
        throw InvalidParameterError("wigner: |alpha| too large for the Laguerre evaluation");
    if (x == 0.0) {   // D(0) = 1: plain parity expectation
        double sum = 0.0;
        for (int n = 0; n < dim; ++n) sum += (n % 2 == 0 ? 1.0 : -1.0) * rho(n, n).real();
        return sum;
    }
    const double log_abs_beta = 0.5 * std::log(x);
    const Complex phase = beta / std::abs(beta);
    const double half_x = 0.5 * x;

    double sum = 0.0;
    Complex phase_d{1.0, 0.0};   // phase^d
    for (int d = 0; d < dim; ++d) {
        // scaled Laguerre recurrence: Lt_n = exp(-x/2) L_n^{(d)}(x)
        double lt_prev = 0.0;
        double lt = std::exp(-half_x);
        const int n_top = dim - d;
        for (int n = 0; n < n_top; ++n) {
            if (n > 0) {
                const double lt_next =
                    ((2.0 * n - 1.0 + d - x) * lt - (n - 1.0 + d) * lt_prev) / double(n);
                lt_prev = lt;
                lt = lt_next;
            }
            // |D_{n+d,n}| = exp(0.5 (lgamma(n+1) - lgamma(n+d+1)) + d ln|beta|) * |Lt|
            const double logmag =
                d == 0 ? 0.0
                       : 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + d + 1.0)) + d * log_abs_beta;
            const double mag = std::exp(logmag) * lt;
            const int m = n + d;
            const double parity = (m % 2 == 0) ? 1.0 : -1.0;
            if (d == 0) {
                sum += parity * rho(n, n).real() * mag;
            } else {
                const Complex term = rho(n, m) * (parity * mag) * phase_d;
                sum += 2.0 * term.real();
            }
        }
        phase_d *= phase;
    }
    return sum;
}

} // namespace

PhaseGrid::PhaseGrid(double x_min_, double x_max_, double p_min_, double p_max_, int nx_, int np_)
    : x_min(x_min_), x_max(x_max_), p_min(p_min_), p_max(p_max_), nx(nx_), np(np_) {
    if (nx < 2 || np < 2) throw InvalidParameterError("PhaseGrid: need at least 2 points per axis");
    if (!(x_max > x_min) || !(p_max > p_min) || !std::isfinite(x_min) || !std::isfinite(x_max) ||
        !std::isfinite(p_min) || !std::isfinite(p_max))
        throw InvalidParameterError("PhaseGrid: extents must be finite and increasing");
}

double PhaseGrid::cell_area() const {
    return (x_max - x_min) / (nx - 1) * (p_max - p_min) / (np - 1);
}

Eigen::MatrixXcd displacement_matrix(int dim, Complex beta) {
    if (dim < 1) throw InvalidParameterError("displacement_matrix: dim must be >= 1");
    const double x = std::norm(beta);
    if (x > kMaxLaguerreArg)
        throw InvalidParameterError("displacement_matrix: |beta| too large");
    MatrixXcd d_mat = MatrixXcd::Zero(dim, dim);
    if (x == 0.0) {
        d_mat.setIdentity();
        return d_mat;
    }
    const double log_abs_beta = 0.5 * std::log(x);
    const Complex phase = beta / std::abs(beta);
    const double half_x = 0.5 * x;
    Complex phase_d{1.0, 0.0};
    for (int d = 0; d < dim; ++d) {
        double lt_prev = 0.0;
        double lt = std::exp(-half_x);
        for (int n = 0; n + d < dim; ++n) {
            if (n > 0) {
                const double lt_next =
                    ((2.0 * n - 1.0 + d - x) * lt - (n - 1.0 + d) * lt_prev) / double(n);
                lt_prev = lt;
                lt = lt_next;
            }
            const double logmag =
                d == 0 ? 0.0
                       : 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + d + 1.0)) + d * log_abs_beta;
            const double mag = std::exp(logmag) * lt;
            // lower: <n+d| D |n>; upper from D_{nm} = (-1)^d conj(D_{mn})
            d_mat(n + d, n) = mag * phase_d;
            if (d > 0) d_mat(n, n + d) = ((d % 2 == 0) ? 1.0 : -1.0) * mag * std::conj(phase_d);
        }
        phase_d *= phase;
    }
    return d_mat;
}

std::complex<double> characteristic_function(const DensityMatrix& rho_a, Complex eta,
                                             double* artifact) {
    require_cavity(rho_a, "characteristic_function");
    const int dim = static_cast<int>(rho_a.dim());
    // generator eta a^dag - eta^* a = -i A with A Hermitian
    MatrixXcd a_gen = MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double s = std::sqrt(double(n));
        a_gen(n, n - 1) = kI * eta * s;            // i eta a^dag
        a_gen(n - 1, n) = -kI * std::conj(eta) * s;   // -i eta^* a
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a_gen);
    if (es.info() != Eigen::Success)
        throw NumericalError("characteristic_function: eigensolver failed");
    const MatrixXcd& v = es.eigenvectors();
    Eigen::VectorXcd ph(dim);
    for (int k = 0; k < dim; ++k) ph(k) = std::exp(-kI * es.eigenvalues()(k));
    const MatrixXcd displacement = v * ph.asDiagonal() * v.adjoint();

    if (artifact) {
        // leakage of the displaced state into the top three Fock levels
        const MatrixXcd sigma = displacement * rho_a.mat * displacement.adjoint();
        double leak = 0.0;
        for (int n = std::max(0, dim - 3); n < dim; ++n) leak += sigma(n, n).real();
        *artifact = leak;
    }
    return (rho_a.mat * displacement).trace();
}

WignerMap wigner(const DensityMatrix& rho_a, const PhaseGrid& grid, int workers) {
    require_cavity(rho_a, "wigner");
    WignerMap map;
    map.grid = grid;
    map.values.resize(grid.nx, grid.np);

    const MatrixXcd& rho = rho_a.mat;
    auto column_range = [&](int j_begin, int j_end) {
        for (int j = j_begin; j < j_end; ++j)
            for (int i = 0; i < grid.nx; ++i)
                map.values(i, j) = kTwoOverPi * displaced_parity_overlap(rho, grid.alpha_at(i, j));
    };

    workers = std::max(1, workers);
    if (workers == 1 || grid.np < 2 * workers) {
        column_range(0, grid.np);
    } else {
        std::vector<std::thread> pool;
        const int per = (grid.np + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int b = w * per, e = std::min(grid.np, b + per);
            if (b < e) pool.emplace_back(column_range, b, e);
        }
        for (auto& t : pool) t.join();
    }

    for (int i = 0; i < grid.nx; ++i) {
        map.boundary_max = std::max({map.boundary_max, std::abs(map.values(i, 0)),
                                     std::abs(map.values(i, grid.np - 1))});
    }
    for (int j = 0; j < grid.np; ++j) {
        map.boundary_max = std::max({map.boundary_max, std::abs(map.values(0, j)),
                                     std::abs(map.values(grid.nx - 1, j))});
    }
    map.boundary_warning = map.boundary_max > 1e-3;
    return map;
}

PhotonDistribution photon_distribution(const DensityMatrix& rho_a) {
    require_cavity(rho_a, "photon_distribution");
    const int dim = static_cast<int>(rho_a.dim());
    PhotonDistribution dist;
    dist.probabilities.resize(dim);
    for (int n = 0; n < dim; ++n)
        dist.probabilities(n) = std::max(rho_a.mat(n, n).real(), -1e-12);
    return dist;
}

} // namespace dicke::phasespace
