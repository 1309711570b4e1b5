#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dicke/dynamics.hpp"
#include "dicke/model.hpp"
#include "oracles.hpp"

using namespace dicke;
using namespace dicke::dynamics;
using hilbert::BasisTag;
using hilbert::JointState;
using hilbert::Operator;
using model::ChargerKind;
using model::ModelParams;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

struct SmallSystem {
    Operator h;
    JointState psi0;
};

SmallSystem dicke_system(int n_atoms, int n_max, ChargerKind kind, double g12, double g23) {
    ModelParams p;
    p.n_atoms = n_atoms;
    p.charger = kind;
    p.g12 = g12;
    p.g23 = g23;
    p.n_max = n_max;
    const hilbert::CavityBasis cavity(n_max);
    const hilbert::AtomBasis atoms = hilbert::enumerate_atom_basis(n_atoms);
    return {model::build_hamiltonians(p, cavity, atoms).h_total,
            model::initial_joint_state(p, cavity, atoms)};
}

PropagationOptions no_check() {
    PropagationOptions o;
    o.truncation_check = false;
    return o;
}

} // namespace

TEST_CASE("time grid contract") {
    const TimeGrid g(20.0, 2001);
    CHECK(g.sample(0) == 0.0);
    CHECK(g.sample(2000) == 20.0);
    CHECK(g.spacing() == doctest::Approx(0.01).epsilon(1e-14));
    const auto s = g.samples();
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
    CHECK_THROWS_AS(TimeGrid(0.0, 10), InvalidParameterError);
    CHECK_THROWS_AS(TimeGrid(1.0, 1), InvalidParameterError);
}

TEST_CASE("spectral propagation returns psi0 at t = 0 and conserves norm") {
    auto [h, psi0] = dicke_system(1, 6, ChargerKind::fock, 0.4, 0.3);
    const TimeGrid grid(5.0, 101);
    PropagationDiagnostics diag;
    const StateTrajectory traj = propagate_spectral(h, psi0, grid, no_check(), &diag);
    REQUIRE(int(traj.states.size()) == grid.n_samples);
    CHECK((traj.states[0].amps - psi0.amps).norm() < 1e-12);
    for (const auto& s : traj.states) CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    CHECK(diag.max_norm_error < 1e-10);
    // fock initial state lives in one photon-parity sector
    CHECK(diag.components_active == 1);
}

TEST_CASE("spectral propagation matches the Taylor-series exponential oracle") {
    auto [h, psi0] = dicke_system(1, 4, ChargerKind::fock, 0.7, 0.4);
    const TimeGrid grid(3.0, 16);
    const StateTrajectory traj = propagate_spectral(h, psi0, grid, no_check());
    for (int i = 0; i < grid.n_samples; i += 5) {
        const MatrixXcd u = oracle::expm_taylor(-kI * grid.sample(i) * h.mat);
        CHECK((traj.states[i].amps - u * psi0.amps).norm() < 1e-9);
    }
}

TEST_CASE("krylov propagation matches spectral and the oracle") {
    auto [h, psi0] = dicke_system(2, 8, ChargerKind::coherent, 1.0, 1.0);
    const TimeGrid grid(4.0, 81);
    const StateTrajectory ref = propagate_spectral(h, psi0, grid, no_check());
    PropagationDiagnostics diag;
    const StateTrajectory kry =
        propagate_krylov(h, psi0, grid, 24, grid.spacing(), no_check(), &diag);
    REQUIRE(kry.states.size() == ref.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.states.size(); ++i)
        worst = std::max(worst, (ref.states[i].amps - kry.states[i].amps).norm());
    CHECK(worst < 1e-8);
    CHECK(diag.steps > 0);

    const MatrixXcd u = oracle::expm_taylor(-kI * grid.t_end * h.mat);
    CHECK((kry.states.back().amps - u * psi0.amps).norm() < 1e-8);
}

TEST_CASE("energy expectation is conserved along both methods") {
    auto [h, psi0] = dicke_system(2, 10, ChargerKind::fock, 0.9, 1.1);
    const TimeGrid grid(6.0, 61);
    for (const StateTrajectory& traj :
         {propagate_spectral(h, psi0, grid, no_check()),
          propagate_krylov(h, psi0, grid, 20, grid.spacing(), no_check())}) {
        const double e0 = psi0.amps.dot(h.mat * psi0.amps).real();
        for (const auto& s : traj.states) {
            const double e = s.amps.dot(h.mat * s.amps).real();
            CHECK(std::abs(e - e0) / std::abs(e0) < 1e-8);
        }
    }
}

TEST_CASE("time reversal returns the initial state") {
    auto [h, psi0] = dicke_system(1, 6, ChargerKind::coherent, 0.8, 0.5);
    const TimeGrid grid(2.5, 11);
    const Operator minus_h(-h.mat, h.basis);
    for (bool krylov : {false, true}) {
        const StateTrajectory fwd = krylov
            ? propagate_krylov(h, psi0, grid, 20, grid.spacing(), no_check())
            : propagate_spectral(h, psi0, grid, no_check());
        const StateTrajectory back = krylov
            ? propagate_krylov(minus_h, fwd.states.back(), grid, 20, grid.spacing(), no_check())
            : propagate_spectral(minus_h, fwd.states.back(), grid, no_check());
        CHECK((back.states.back().amps - psi0.amps).norm() < 1e-8);
    }
}

TEST_CASE("complex Hermitian Hamiltonians take the dense fallback") {
    const int dc = 5, da = 6;
    const Eigen::Index dim = Eigen::Index(dc) * da;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = std::complex<double>(g(rng), g(rng));
    m = ((m + m.adjoint()) / 2.0).eval();
    const Operator h(m, BasisTag::joint);

    VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = std::complex<double>(g(rng), g(rng));
    v /= v.norm();
    const JointState psi0(v, dc, da);

    const TimeGrid grid(1.5, 7);
    const StateTrajectory sp = propagate_spectral(h, psi0, grid, no_check());
    const StateTrajectory kr = propagate_krylov(h, psi0, grid, 18, grid.spacing(), no_check());
    const MatrixXcd u = oracle::expm_taylor(-kI * grid.t_end * m);
    CHECK((sp.states.back().amps - u * v).norm() < 1e-9);
    CHECK((kr.states.back().amps - u * v).norm() < 1e-8);
}

TEST_CASE("propagation rejects bad inputs") {
    auto [h, psi0] = dicke_system(1, 5, ChargerKind::fock, 0.5, 0.5);
    const TimeGrid grid(1.0, 5);

    CHECK_THROWS_AS(propagate_krylov(h, psi0, grid, 3, grid.spacing(), no_check()),
                    InvalidParameterError);
    CHECK_THROWS_AS(propagate_krylov(h, psi0, grid, 12, 2.0 * grid.spacing(), no_check()),
                    InvalidParameterError);

    JointState bad = psi0;
    bad.amps *= 1.01;
    CHECK_THROWS_AS(propagate_spectral(h, bad, grid, no_check()), StaleStateError);

    Operator not_herm = h;
    not_herm.mat(0, 1) += 0.3;
    CHECK_THROWS_AS(propagate_spectral(not_herm, psi0, grid, no_check()), InvalidParameterError);
}

TEST_CASE("truncation gate aborts leaking runs and passes clean ones") {
    // strong coupling against a cutoff barely above the initial support
    ModelParams p;
    p.n_atoms = 1;
    p.charger = ChargerKind::fock;
    p.g12 = p.g23 = 1.5;
    p.n_max = 4;
    const hilbert::CavityBasis cavity(4);
    const hilbert::AtomBasis atoms = hilbert::enumerate_atom_basis(1);
    const Operator h = model::build_hamiltonians(p, cavity, atoms).h_total;
    const JointState psi0 = model::initial_joint_state(p, cavity, atoms);
    const TimeGrid grid(5.0, 51);

    PropagationOptions strict;
    strict.truncation_check = true;
    CHECK_THROWS_AS(propagate_spectral(h, psi0, grid, strict), TruncationError);
    CHECK_THROWS_AS(propagate_krylov(h, psi0, grid, 16, grid.spacing(), strict), TruncationError);

    // a generous cutoff passes the gate (the spread at this coupling is real:
    // populations above 1e-6 reach photon numbers near 50 from an initial |2>)
    auto [h2, psi2] = dicke_system(1, 60, ChargerKind::fock, 1.5, 1.5);
    PropagationDiagnostics diag;
    propagate_spectral(h2, psi2, grid, strict, &diag);
    CHECK(diag.max_leak < 1e-6);
}

TEST_CASE("streaming and trajectory APIs agree") {
    ModelParams p;
    p.n_atoms = 2;
    p.charger = ChargerKind::coherent;
    p.n_max = 26;
    const hilbert::CavityBasis cavity(26);
    const hilbert::AtomBasis atoms = hilbert::enumerate_atom_basis(2);
    const sparse::CsrMatrix csr = model::build_sparse_hamiltonian(p, cavity, atoms);
    const JointState psi0 = model::initial_joint_state(p, cavity, atoms);
    const Operator h = model::build_hamiltonians(p, cavity, atoms).h_total;
    const TimeGrid grid(3.0, 31);
    const JointLayout layout{cavity.dimension(), atoms.dimension()};

    const StateTrajectory ref = propagate_spectral(h, psi0, grid, no_check());
    int visited = 0;
    propagate_spectral_sparse(csr, psi0.amps, grid, layout, no_check(),
                              [&](int i, double, const VectorXcd& psi) {
                                  CHECK((psi - ref.states[i].amps).norm() < 1e-10);
                                  ++visited;
                              });
    CHECK(visited == grid.n_samples);

    visited = 0;
    propagate_krylov_sparse(csr, psi0.amps, grid, layout, no_check(),
                            [&](int i, double, const VectorXcd& psi) {
                                CHECK((psi - ref.states[i].amps).norm() < 1e-8);
                                ++visited;
                            });
    CHECK(visited == grid.n_samples);
}
