#include "dicke/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "dicke/lapack.hpp"

namespace dicke::dynamics {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr Complex kI{0.0, 1.0};

bool is_real_matrix(const MatrixXcd& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return m.imag().cwiseAbs().maxCoeff() <= 1e-13 * scale;
}

sparse::CsrMatrix csr_from_dense_real(const MatrixXcd& m) {
    std::vector<sparse::Triplet> t;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m(r, c).real() != 0.0) t.push_back({r, c, m(r, c).real()});
    return sparse::csr_from_triplets(static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                                     std::move(t));
}

void check_sample(const VectorXcd& psi, const JointLayout& layout, double t,
                  const PropagationOptions& opts, PropagationDiagnostics* diag) {
    const double norm_err = std::abs(psi.norm() - 1.0);
    if (diag) diag->max_norm_error = std::max(diag->max_norm_error, norm_err);
    if (opts.truncation_check) {
        const double leak = truncation_leak(psi, layout);
        if (diag) diag->max_leak = std::max(diag->max_leak, leak);
        if (leak > opts.leak_tol)
            throw TruncationError("propagation: top-3 Fock population " + std::to_string(leak) +
                                  " at t=" + std::to_string(t) + " exceeds " +
                                  std::to_string(opts.leak_tol) + "; increase n_max");
    }
}

// Indices of each sparsity-graph component that carries amplitude, sorted.
std::vector<std::vector<int>> active_components(const sparse::CsrMatrix& h, const VectorXcd& psi0,
                                                PropagationDiagnostics* diag) {
    int n_comp = 0;
    const std::vector<int> label = sparse::connected_components(h, &n_comp);
    std::vector<double> mass(n_comp, 0.0);
    for (int i = 0; i < h.rows; ++i) mass[label[i]] += std::norm(psi0(i));
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of(n_comp, -1);
    for (int i = 0; i < h.rows; ++i) {
        const int c = label[i];
        if (mass[c] == 0.0) continue;
        if (group_of[c] < 0) {
            group_of[c] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[group_of[c]].push_back(i);   // ascending because i is
    }
    if (diag) {
        diag->components_active = static_cast<int>(groups.size());
        for (const auto& g : groups)
            diag->component_dim_max = std::max(diag->component_dim_max, static_cast<int>(g.size()));
    }
    return groups;
}

// ------------------------------ Krylov stepper -------------------------------

using MatVec = std::function<void(const VectorXcd&, VectorXcd&)>;

// Short-iterative Lanczos exp(-iHt) stepper on one basis per (re)build.
class KrylovStepper {
public:
    KrylovStepper(MatVec apply, Eigen::Index n, int m, double width, double step_tol,
                  PropagationDiagnostics* diag)
        : apply_(std::move(apply)), n_(n), m_(std::min<Eigen::Index>(m, n)), width_(width),
          step_tol_(step_tol), diag_(diag) {
        basis_.resize(n_, m_ + 1);
        alpha_.resize(m_);
        beta_.resize(m_);
        work_.resize(n_);
    }

    // Advance phi by exactly h (one or more Lanczos builds).
    void advance(VectorXcd& phi, double h) {
        double remaining = h;
        const double floor = h * std::ldexp(1.0, -24);
        while (remaining > 0.0) {
            build_basis(phi);
            double h_try = remaining;
            VectorXcd u;
            if (!happy_) {
                for (;;) {
                    u = small_exp(h_try);
                    const double err = beta_next_ * h_try * std::abs(u(m_eff_ - 1));
                    if (err <= step_tol_) break;
                    h_try *= 0.5;
                    if (diag_) ++diag_->subdivisions;
                    if (h_try < floor)
                        throw IntegrationError(
                            "krylov: residual gate not met after subdividing to h=" +
                            std::to_string(h_try) + " (krylov_dim too small?)");
                }
            } else {
                u = small_exp(h_try);   // invariant subspace: exact for any step
            }
            phi = phi_norm_ * (basis_.leftCols(m_eff_) * u);
            if (diag_) ++diag_->steps;
            remaining -= h_try;
            if (remaining < floor) break;
        }
    }

private:
    void build_basis(const VectorXcd& phi) {
        phi_norm_ = phi.norm();
        if (phi_norm_ == 0.0) throw NumericalError("krylov: zero state");
        basis_.col(0) = phi / phi_norm_;
        happy_ = false;
        beta_next_ = 0.0;
        int j = 0;
        for (; j < m_; ++j) {
            apply_(basis_.col(j), work_);
            if (diag_) ++diag_->matvecs;
            alpha_(j) = basis_.col(j).dot(work_).real();
            work_ -= alpha_(j) * basis_.col(j);
            if (j > 0) work_ -= beta_(j - 1) * basis_.col(j - 1);
            // one full reorthogonalization pass keeps the basis clean
            for (int k = 0; k <= j; ++k) work_ -= basis_.col(k).dot(work_) * basis_.col(k);
            const double b = work_.norm();
            if (b <= 1e-12 * std::max(1.0, width_)) {
                happy_ = true;
                ++j;
                break;
            }
            beta_(j) = b;
            basis_.col(j + 1) = work_ / b;
        }
        m_eff_ = j;
        if (!happy_) beta_next_ = beta_(m_eff_ - 1);
        // tridiagonal T of the built basis
        MatrixXd t = MatrixXd::Zero(m_eff_, m_eff_);
        for (int k = 0; k < m_eff_; ++k) {
            t(k, k) = alpha_(k);
            if (k + 1 < m_eff_) t(k + 1, k) = t(k, k + 1) = beta_(k);
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
        if (es.info() != Eigen::Success)
            throw NumericalError("krylov: tridiagonal eigensolver failed");
        theta_ = es.eigenvalues();
        q_ = es.eigenvectors();
    }

    // u = exp(-i h T) e1 from the cached tridiagonal eigensystem.
    VectorXcd small_exp(double h) const {
        VectorXcd f(m_eff_);
        for (int k = 0; k < m_eff_; ++k)
            f(k) = std::exp(-kI * theta_(k) * h) * q_(0, k);
        return q_.cast<Complex>() * f;
    }

    MatVec apply_;
    Eigen::Index n_;
    int m_;
    double width_;
    double step_tol_;
    PropagationDiagnostics* diag_;

    MatrixXcd basis_;
    VectorXd alpha_, beta_;
    VectorXcd work_;
    VectorXd theta_;
    MatrixXd q_;
    double phi_norm_ = 1.0;
    double beta_next_ = 0.0;
    int m_eff_ = 0;
    bool happy_ = false;
};

// Substep size from the spectral width: the residual of a dimension-m Krylov
// approximation behaves like (h W / 2)^m / m!.
double default_substep(double width, int m, double step_tol, double spacing) {
    const double x = std::exp((std::log(step_tol * 1e-2) + std::lgamma(double(m) + 1.0)) / double(m));
    const double h = 2.0 * x / std::max(width, 1e-12);
    return std::min(spacing, h);
}

} // namespace

TimeGrid::TimeGrid(double t_end_, int n_samples_) : t_end(t_end_), n_samples(n_samples_) {
    if (!(t_end > 0.0)) throw InvalidParameterError("TimeGrid: t_end must be positive");
    if (n_samples < 2) throw InvalidParameterError("TimeGrid: need at least samples 0 and t_end");
}

std::vector<double> TimeGrid::samples() const {
    std::vector<double> s(n_samples);
    for (int i = 0; i < n_samples; ++i) s[i] = sample(i);
    return s;
}

double truncation_leak(const VectorXcd& psi, const JointLayout& layout) {
    const int da = layout.atom_dim, dc = layout.cavity_dim;
    double leak = 0.0;
    for (int n = std::max(0, dc - 3); n < dc; ++n)
        leak += psi.segment(Eigen::Index(n) * da, da).squaredNorm();
    return leak;
}

void propagate_spectral_sparse(const sparse::CsrMatrix& h, const VectorXcd& psi0,
                               const TimeGrid& grid, const JointLayout& layout,
                               const PropagationOptions& opts, const SampleVisitor& visit,
                               PropagationDiagnostics* diag) {
    if (h.rows != h.cols || h.rows != psi0.size() || psi0.size() != layout.dim())
        throw InvalidParameterError("propagate_spectral_sparse: dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-6)
        throw StaleStateError("propagate_spectral_sparse: psi0 is not normalized");

    const auto groups = active_components(h, psi0, diag);

    struct Block {
        std::vector<int> idx;
        MatrixXd vectors;
        VectorXd eigenvalues;
        VectorXcd coeff;
    };
    std::vector<Block> blocks;
    blocks.reserve(groups.size());
    for (const auto& g : groups) {
        const int n = static_cast<int>(g.size());
        if (n > opts.max_dense_dim)
            throw NumericalError("propagate_spectral_sparse: component dimension " +
                                 std::to_string(n) + " exceeds the dense limit " +
                                 std::to_string(opts.max_dense_dim) + "; use the krylov method");
        Block b;
        b.idx = g;
        sparse::CsrMatrix sub = sparse::csr_submatrix(h, g);
        la::eigh_real(sub.to_dense(), b.eigenvalues, b.vectors);
        VectorXd local_re(n), local_im(n);
        for (int i = 0; i < n; ++i) {
            local_re(i) = psi0(g[i]).real();
            local_im(i) = psi0(g[i]).imag();
        }
        const VectorXd c_re = b.vectors.transpose() * local_re;
        const VectorXd c_im = b.vectors.transpose() * local_im;
        b.coeff.resize(n);
        for (int i = 0; i < n; ++i) b.coeff(i) = Complex(c_re(i), c_im(i));
        blocks.push_back(std::move(b));
    }

    VectorXcd full = VectorXcd::Zero(psi0.size());
    constexpr int kChunk = 64;
    std::vector<MatrixXd> yr(blocks.size()), yi(blocks.size());
    for (int start = 0; start < grid.n_samples; start += kChunk) {
        const int count = std::min(kChunk, grid.n_samples - start);
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const Block& b = blocks[bi];
            const int n = static_cast<int>(b.idx.size());
            MatrixXd pr(n, count), pi(n, count);
            for (int s = 0; s < count; ++s) {
                const double t = grid.sample(start + s);
                for (int k = 0; k < n; ++k) {
                    const Complex v = std::exp(-kI * b.eigenvalues(k) * t) * b.coeff(k);
                    pr(k, s) = v.real();
                    pi(k, s) = v.imag();
                }
            }
            yr[bi] = b.vectors * pr;
            yi[bi] = b.vectors * pi;
        }
        for (int s = 0; s < count; ++s) {
            for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                const Block& b = blocks[bi];
                for (std::size_t k = 0; k < b.idx.size(); ++k)
                    full(b.idx[k]) = Complex(yr[bi](k, s), yi[bi](k, s));
            }
            const double t = grid.sample(start + s);
            check_sample(full, layout, t, opts, diag);
            visit(start + s, t, full);
        }
    }
}

void propagate_krylov_sparse(const sparse::CsrMatrix& h, const VectorXcd& psi0,
                             const TimeGrid& grid, const JointLayout& layout,
                             const PropagationOptions& opts, const SampleVisitor& visit,
                             PropagationDiagnostics* diag) {
    if (h.rows != h.cols || h.rows != psi0.size() || psi0.size() != layout.dim())
        throw InvalidParameterError("propagate_krylov_sparse: dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-6)
        throw StaleStateError("propagate_krylov_sparse: psi0 is not normalized");
    if (opts.krylov_dim < 4)
        throw InvalidParameterError("propagate_krylov_sparse: krylov_dim must be >= 4");
    if (opts.dt > 0.0 && opts.dt > grid.spacing() * (1.0 + 1e-12))
        throw InvalidParameterError("propagate_krylov_sparse: dt must not exceed the sample spacing");

    const auto groups = active_components(h, psi0, diag);
    std::vector<int> idx;
    for (const auto& g : groups) idx.insert(idx.end(), g.begin(), g.end());
    std::sort(idx.begin(), idx.end());
    const sparse::CsrMatrix sub = sparse::csr_submatrix(h, idx);

    VectorXcd phi(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) phi(i) = psi0(idx[i]);

    double lo = 0.0, hi = 0.0;
    sub.gershgorin(lo, hi);
    const double width = std::max(hi - lo, 1e-12);
    const double h_sub =
        opts.dt > 0.0 ? opts.dt : default_substep(width, opts.krylov_dim, opts.step_tol, grid.spacing());

    KrylovStepper stepper([&sub](const VectorXcd& x, VectorXcd& y) { sub.multiply(x.data(), y.data()); },
                          static_cast<Eigen::Index>(idx.size()), opts.krylov_dim, width,
                          opts.step_tol, diag);

    VectorXcd full = VectorXcd::Zero(psi0.size());
    auto emit = [&](int i, double t) {
        for (std::size_t k = 0; k < idx.size(); ++k) full(idx[k]) = phi(k);
        check_sample(full, layout, t, opts, diag);
        visit(i, t, full);
    };

    emit(0, 0.0);
    for (int i = 1; i < grid.n_samples; ++i) {
        const double interval = grid.sample(i) - grid.sample(i - 1);
        const int n_sub = std::max(1, static_cast<int>(std::ceil(interval / h_sub - 1e-9)));
        const double step = interval / n_sub;
        for (int k = 0; k < n_sub; ++k) stepper.advance(phi, step);
        emit(i, grid.sample(i));
    }
}

namespace {

StateTrajectory collect_trajectory(const TimeGrid& grid, const JointLayout& layout,
                                   const std::function<void(const SampleVisitor&)>& run) {
    StateTrajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.n_samples);
    run([&](int, double, const VectorXcd& psi) {
        traj.states.emplace_back(psi, layout.cavity_dim, layout.atom_dim);
    });
    return traj;
}

void require_joint_input(const Operator& h, const JointState& psi0) {
    if (h.dim() != psi0.dim())
        throw InvalidParameterError("propagate: Hamiltonian and state dimensions differ");
    if (!hilbert::is_hermitian(h.mat, 1e-10 * std::max(1.0, h.mat.cwiseAbs().maxCoeff())))
        throw InvalidParameterError("propagate: Hamiltonian is not Hermitian");
    if (std::abs(psi0.norm() - 1.0) > 1e-6)
        throw StaleStateError("propagate: psi0 is not normalized");
}

} // namespace

StateTrajectory propagate_spectral(const Operator& h, const JointState& psi0, const TimeGrid& grid,
                                   const PropagationOptions& opts, PropagationDiagnostics* diag) {
    require_joint_input(h, psi0);
    const JointLayout layout{psi0.cavity_dim, psi0.atom_dim};

    if (is_real_matrix(h.mat)) {
        const sparse::CsrMatrix csr = csr_from_dense_real(h.mat);
        return collect_trajectory(grid, layout, [&](const SampleVisitor& v) {
            propagate_spectral_sparse(csr, psi0.amps, grid, layout, opts, v, diag);
        });
    }

    // complex Hermitian fallback (test-scale systems)
    if (h.dim() > opts.max_dense_dim)
        throw NumericalError("propagate_spectral: dimension exceeds the dense limit");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h.mat);
    if (es.info() != Eigen::Success)
        throw NumericalError("propagate_spectral: eigendecomposition failed at dimension " +
                             std::to_string(h.dim()));
    if (diag) {
        diag->components_active = 1;
        diag->component_dim_max = static_cast<int>(h.dim());
    }
    const MatrixXcd& v = es.eigenvectors();
    const VectorXd& w = es.eigenvalues();
    const VectorXcd c = v.adjoint() * psi0.amps;

    StateTrajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.n_samples);
    VectorXcd phase(c.size());
    for (int i = 0; i < grid.n_samples; ++i) {
        const double t = grid.sample(i);
        for (Eigen::Index k = 0; k < c.size(); ++k) phase(k) = std::exp(-kI * w(k) * t) * c(k);
        VectorXcd psi = v * phase;
        check_sample(psi, layout, t, opts, diag);
        traj.states.emplace_back(std::move(psi), layout.cavity_dim, layout.atom_dim);
    }
    return traj;
}

StateTrajectory propagate_krylov(const Operator& h, const JointState& psi0, const TimeGrid& grid,
                                 int krylov_dim, double dt, const PropagationOptions& opts,
                                 PropagationDiagnostics* diag) {
    require_joint_input(h, psi0);
    if (krylov_dim < 4) throw InvalidParameterError("propagate_krylov: krylov_dim must be >= 4");
    if (!(dt > 0.0)) throw InvalidParameterError("propagate_krylov: dt must be positive");
    if (dt > grid.spacing() * (1.0 + 1e-12))
        throw InvalidParameterError("propagate_krylov: dt must not exceed the sample spacing");
    const JointLayout layout{psi0.cavity_dim, psi0.atom_dim};
    PropagationOptions local = opts;
    local.krylov_dim = krylov_dim;
    local.dt = dt;

    if (is_real_matrix(h.mat)) {
        const sparse::CsrMatrix csr = csr_from_dense_real(h.mat);
        return collect_trajectory(grid, layout, [&](const SampleVisitor& v) {
            propagate_krylov_sparse(csr, psi0.amps, grid, layout, local, v, diag);
        });
    }

    // complex Hermitian path: same stepper on a dense matvec
    const MatrixXcd& m = h.mat;
    double width = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        double radius = 0.0;
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (c != r) radius += std::abs(m(r, c));
        width = std::max(width, 2.0 * radius + std::abs(m(r, r)));
    }
    const double h_sub = local.dt > 0.0
                             ? local.dt
                             : default_substep(width, krylov_dim, local.step_tol, grid.spacing());
    KrylovStepper stepper([&m](const VectorXcd& x, VectorXcd& y) { y.noalias() = m * x; },
                          m.rows(), krylov_dim, width, local.step_tol, diag);

    StateTrajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.n_samples);
    VectorXcd phi = psi0.amps;
    check_sample(phi, layout, 0.0, local, diag);
    traj.states.emplace_back(phi, layout.cavity_dim, layout.atom_dim);
    for (int i = 1; i < grid.n_samples; ++i) {
        const double interval = grid.sample(i) - grid.sample(i - 1);
        const int n_sub = std::max(1, static_cast<int>(std::ceil(interval / h_sub - 1e-9)));
        const double step = interval / n_sub;
        for (int k = 0; k < n_sub; ++k) stepper.advance(phi, step);
        check_sample(phi, layout, grid.sample(i), local, diag);
        traj.states.emplace_back(phi, layout.cavity_dim, layout.atom_dim);
    }
    return traj;
}

} // namespace dicke::dynamics
