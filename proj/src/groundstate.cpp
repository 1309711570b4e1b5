#include "dicke/groundstate.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "dicke/lapack.hpp"

namespace dicke::groundstate {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* phase_name(Phase p) {
    return p == Phase::normal ? "normal" : "superradiant";
}

namespace {

bool is_diagonal(const sparse::CsrMatrix& h) {
    for (int r = 0; r < h.rows; ++r)
        for (int k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k)
            if (h.col_idx[k] != r && h.values[k] != 0.0) return false;
    return true;
}

double min_diagonal(const sparse::CsrMatrix& h) {
    double lo = 0.0;
    bool first = true;
    for (int r = 0; r < h.rows; ++r) {
        double d = 0.0;
        for (int k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k)
            if (h.col_idx[k] == r) d += h.values[k];
        if (first || d < lo) lo = d;
        first = false;
    }
    return lo;
}

} // namespace

double smallest_eigenvalue(const sparse::CsrMatrix& h, const SolveOptions& opts,
                           SolveDiagnostics* diag) {
    if (h.rows != h.cols) throw InvalidParameterError("smallest_eigenvalue: matrix must be square");
    const int n = h.rows;

    // a diagonal matrix's spectrum is its diagonal
    if (is_diagonal(h)) {
        if (diag) diag->residual = 0.0;
        return min_diagonal(h);
    }

    if (n < opts.dense_below) {
        if (diag) diag->dense_path = true;
        return la::eigvals_real(h.to_dense()).minCoeff();
    }

    double lo = 0.0, hi = 0.0;
    h.gershgorin(lo, hi);
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});

    const int m_max = std::min(opts.max_basis, n);
    MatrixXd basis(n, m_max);
    VectorXd alpha(m_max), beta(m_max), work(n);

    // deterministic start vector
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = dist(rng);
    v /= v.norm();

    double theta = 0.0, residual = 0.0;
    for (int cycle = 0; cycle < opts.max_restarts; ++cycle) {
        if (diag) diag->restarts = cycle;
        basis.col(0) = v;
        int m = 0;
        bool breakdown = false;
        for (int j = 0; j < m_max; ++j) {
            h.multiply(basis.col(j).data(), work.data());
            alpha(j) = basis.col(j).dot(work);
            work -= alpha(j) * basis.col(j);
            if (j > 0) work -= beta(j - 1) * basis.col(j - 1);
            for (int k = 0; k <= j; ++k) work -= basis.col(k).dot(work) * basis.col(k);
            if (diag) ++diag->iterations;
            m = j + 1;
            const double b = work.norm();
            if (b <= 1e-13 * scale) {
                breakdown = true;
                break;
            }
            if (j + 1 < m_max) {
                beta(j) = b;
                basis.col(j + 1) = work / b;
            } else {
                beta(j) = b;
            }
        }

        MatrixXd t = MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            t(k, k) = alpha(k);
            if (k + 1 < m) t(k + 1, k) = t(k, k + 1) = beta(k);
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
        if (es.info() != Eigen::Success)
            throw NumericalError("smallest_eigenvalue: tridiagonal eigensolver failed");
        theta = es.eigenvalues()(0);
        const VectorXd s = es.eigenvectors().col(0);
        residual = breakdown ? 0.0 : std::abs(beta(m - 1) * s(m - 1));
        if (diag) diag->residual = residual;
        if (residual <= opts.tol * scale) return theta;

        v = basis.leftCols(m) * s;   // restart from the best Ritz vector
        v /= v.norm();
    }
    throw NumericalError("smallest_eigenvalue: no convergence after " +
                         std::to_string(opts.max_restarts) + " restarts (residual " +
                         std::to_string(residual) + ", tol " + std::to_string(opts.tol * scale) +
                         ", dim " + std::to_string(n) + ")");
}

namespace {

double solve_at_cutoff(const model::ModelParams& params, int n_max, const SolveOptions& opts,
                       SolveDiagnostics* diag, std::map<int, model::HamiltonianParts>* cache) {
    const hilbert::CavityBasis cavity(n_max);
    const hilbert::AtomBasis atoms = hilbert::enumerate_atom_basis(params.n_atoms);
    sparse::CsrMatrix h;
    if (cache) {
        auto it = cache->find(n_max);
        if (it == cache->end())
            it = cache->emplace(n_max, model::build_hamiltonian_parts(params, cavity, atoms)).first;
        h = it->second.assemble(params.g12, params.g23);
    } else {
        h = model::build_sparse_hamiltonian(params, cavity, atoms);
    }
    return smallest_eigenvalue(h, opts, diag);
}

PhasePoint classify(const model::ModelParams& params, double e_g) {
    PhasePoint p;
    p.g12 = params.g12;
    p.g23 = params.g23;
    p.ground_energy = e_g;
    p.phase = e_g > -kPhaseEpsilon ? Phase::normal : Phase::superradiant;
    return p;
}

PhasePoint ground_energy_cached(const model::ModelParams& params, const SolveOptions& opts,
                                SolveDiagnostics* diag,
                                std::map<int, model::HamiltonianParts>* cache) {
    params.validate();
    if (params.n_max >= 1) {
        // explicit cutoff: trust the caller
        const double e = solve_at_cutoff(params, params.n_max, opts, diag, cache);
        if (diag) diag->n_max_used = params.n_max;
        return classify(params, e);
    }
    int n_max = opts.n_max_start;
    double e_prev = solve_at_cutoff(params, n_max, opts, diag, cache);
    while (2 * n_max <= opts.n_max_limit) {
        const double e_next = solve_at_cutoff(params, 2 * n_max, opts, diag, cache);
        if (std::abs(e_next - e_prev) < opts.cutoff_tol) {
            if (diag) diag->n_max_used = 2 * n_max;
            return classify(params, e_next);
        }
        n_max *= 2;
        e_prev = e_next;
    }
    throw TruncationError("ground_energy: cutoff did not converge below n_max=" +
                          std::to_string(opts.n_max_limit));
}

} // namespace

PhasePoint ground_energy(const model::ModelParams& params, const SolveOptions& opts,
                         SolveDiagnostics* diag) {
    return ground_energy_cached(params, opts, diag, nullptr);
}

std::vector<PhasePoint> phase_scan(double g12_min, double g12_max, double g23_min, double g23_max,
                                   int resolution, const model::ModelParams& base,
                                   const SolveOptions& opts) {
    if (resolution < 1) throw InvalidParameterError("phase_scan: resolution must be >= 1");
    if (g12_max < g12_min || g23_max < g23_min)
        throw InvalidParameterError("phase_scan: empty coupling range");
    std::map<int, model::HamiltonianParts> cache;
    std::vector<PhasePoint> points;
    points.reserve(std::size_t(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        const double g12 =
            resolution == 1 ? g12_min : g12_min + (g12_max - g12_min) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double g23 =
                resolution == 1 ? g23_min : g23_min + (g23_max - g23_min) * j / (resolution - 1);
            model::ModelParams p = base;
            p.g12 = g12;
            p.g23 = g23;
            points.push_back(ground_energy_cached(p, opts, nullptr, &cache));
        }
    }
    return points;
}

} // namespace dicke::groundstate
