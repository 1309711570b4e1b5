#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke/model.hpp"
#include "dicke/lapack.hpp"
#include "oracles.hpp"

using namespace dicke;
using namespace dicke::model;
using hilbert::AtomBasis;
using hilbert::BasisTag;
using hilbert::CavityBasis;
using hilbert::JointState;
using hilbert::Operator;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

ModelParams params_n(int n, ChargerKind kind) {
    ModelParams p;
    p.n_atoms = n;
    p.charger = kind;
    return p;
}

double mean_photons(const Eigen::VectorXcd& amps) {
    double m = 0.0;
    for (Eigen::Index n = 0; n < amps.size(); ++n) m += double(n) * std::norm(amps(n));
    return m;
}

} // namespace

TEST_CASE("parameter validation") {
    ModelParams p;
    p.validate();
    p.n_atoms = 0;
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
    p = ModelParams{};
    p.omega2 = 2.0;   // breaks omega2 < omega3
    p.omega3 = 1.5;
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
    p = ModelParams{};
    p.g12 = -0.1;
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
}

TEST_CASE("cutoff scan reproduces the analytic tail bounds") {
    // frozen against a direct evaluation of the analytic distributions
    CHECK(min_n_max_for_tail(ChargerKind::fock, 6) == 12);
    CHECK(min_n_max_for_tail(ChargerKind::coherent, 6) == 40);
    CHECK(min_n_max_for_tail(ChargerKind::squeezed, 6) == 522);
    CHECK(min_n_max_for_tail(ChargerKind::coherent, 10) == 54);
    CHECK(min_n_max_for_tail(ChargerKind::squeezed, 10) == 856);
    for (ChargerKind k : {ChargerKind::fock, ChargerKind::coherent, ChargerKind::squeezed}) {
        ModelParams p = params_n(6, k);
        CHECK(auto_n_max(p) > min_n_max_for_tail(k, 6));
    }
}

TEST_CASE("fock charger is a single Fock amplitude") {
    const ModelParams p = params_n(6, ChargerKind::fock);
    const CavityBasis cavity(20);
    const ChargerState c = charger_state(p, cavity);
    CHECK(std::abs(c.amps(12)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.amps.norm() == doctest::Approx(1.0).epsilon(1e-15));
    for (int n = 0; n <= 20; ++n)
        if (n != 12) CHECK(std::abs(c.amps(n)) == 0.0);
}

TEST_CASE("coherent charger carries the input energy") {
    const ModelParams p = params_n(6, ChargerKind::coherent);
    const CavityBasis cavity(model::auto_n_max(p));
    const ChargerState c = charger_state(p, cavity);
    CHECK(mean_photons(c.amps) == doctest::Approx(12.0).epsilon(1e-6));
    CHECK(c.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("squeezed charger: energy, parity, analytic amplitudes") {
    const ModelParams p = params_n(6, ChargerKind::squeezed);
    const CavityBasis cavity(model::auto_n_max(p));
    const ChargerState c = charger_state(p, cavity);

    CHECK(mean_photons(c.amps) == doctest::Approx(12.0).epsilon(1e-6));
    for (int n = 1; n <= cavity.n_max; n += 2) CHECK(std::abs(c.amps(n)) == 0.0);

    // <a> = 0
    std::complex<double> a_exp = 0.0;
    for (int n = 1; n <= cavity.n_max; ++n)
        a_exp += std::conj(c.amps(n - 1)) * std::sqrt(double(n)) * c.amps(n);
    CHECK(std::abs(a_exp) < 1e-10);

    // amplitudes match the lgamma-based closed form (its own error is ~1e-12)
    const VectorXd ref = oracle::squeezed_amplitudes(12.0, cavity.n_max);
    for (int n = 0; n <= cavity.n_max; n += 2)
        CHECK(std::abs(c.amps(n).real() - ref(n)) < 1e-10);
}

TEST_CASE("all charger kinds carry identical input energy") {
    for (ChargerKind k : {ChargerKind::fock, ChargerKind::coherent, ChargerKind::squeezed}) {
        ModelParams p = params_n(3, k);
        const CavityBasis cavity(resolve_n_max(p));
        const ChargerState c = charger_state(p, cavity);
        CHECK(mean_photons(c.amps) == doctest::Approx(6.0).epsilon(1e-6));
    }
}

TEST_CASE("insufficient cutoff raises a truncation error") {
    ModelParams p = params_n(6, ChargerKind::coherent);
    CHECK_THROWS_AS(charger_state(p, CavityBasis(10)), TruncationError);
    p.charger = ChargerKind::squeezed;
    CHECK_THROWS_AS(charger_state(p, CavityBasis(100)), TruncationError);
    p.charger = ChargerKind::fock;
    CHECK_THROWS_AS(charger_state(p, CavityBasis(11)), TruncationError);
}

TEST_CASE("decoupled energy expectation equals the input energy") {
    for (ChargerKind k : {ChargerKind::fock, ChargerKind::coherent, ChargerKind::squeezed}) {
        ModelParams p = params_n(2, k);
        p.g12 = p.g23 = 0.0;
        const CavityBasis cavity(resolve_n_max(p));
        const AtomBasis atoms = hilbert::enumerate_atom_basis(p.n_atoms);
        const Hamiltonians h = build_hamiltonians(p, cavity, atoms);
        const JointState psi = initial_joint_state(p, cavity, atoms);
        const std::complex<double> e = psi.amps.dot(h.h_total.mat * psi.amps);
        CHECK(e.real() == doctest::Approx(4.0).epsilon(1e-6));
        CHECK(std::abs(e.imag()) < 1e-12);
    }
}

TEST_CASE("Hamiltonians are Hermitian with zero-diagonal interaction") {
    ModelParams p = params_n(3, ChargerKind::coherent);
    p.g12 = 0.731;
    p.g23 = 1.385;
    p.n_max = 24;
    const CavityBasis cavity(24);
    const AtomBasis atoms = hilbert::enumerate_atom_basis(3);
    const Hamiltonians h = build_hamiltonians(p, cavity, atoms);
    for (const Operator* op : {&h.h_charger, &h.h_battery, &h.h_interaction, &h.h_total})
        CHECK(hilbert::is_hermitian(op->mat, 1e-12));
    for (Eigen::Index i = 0; i < h.h_interaction.dim(); ++i)
        CHECK(std::abs(h.h_interaction.mat(i, i)) == 0.0);
}

TEST_CASE("N=1, n_max=1 Hamiltonian matches the hand-computed 6x6 matrix") {
    ModelParams p = params_n(1, ChargerKind::fock);
    p.g12 = 0.37;
    p.g23 = 0.81;
    p.n_max = 1;
    const CavityBasis cavity(1);
    const AtomBasis atoms = hilbert::enumerate_atom_basis(1);
    const Hamiltonians h = build_hamiltonians(p, cavity, atoms);

    // basis order: (n=0,l1),(0,l2),(0,l3),(1,l1),(1,l2),(1,l3); sqrt(N)=1
    MatrixXcd expect(6, 6);
    const double w2 = 1.0, w3 = 1.95, a = 0.37, b = 0.81;
    expect << 0, 0, 0, 0, a, 0,
              0, w2, 0, a, 0, b,
              0, 0, w3, 0, b, 0,
              0, a, 0, 1, 0, 0,
              a, 0, b, 0, 1 + w2, 0,
              0, b, 0, 0, 0, 1 + w3;
    CHECK((h.h_total.mat - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("initial joint state: empty battery, full charger, product form") {
    for (ChargerKind k : {ChargerKind::fock, ChargerKind::coherent, ChargerKind::squeezed}) {
        ModelParams p = params_n(2, k);
        const CavityBasis cavity(resolve_n_max(p));
        const AtomBasis atoms = hilbert::enumerate_atom_basis(2);
        const JointState psi = initial_joint_state(p, cavity, atoms);
        CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));

        const auto rho_b = hilbert::partial_trace(psi, BasisTag::atom);
        const Operator h_b = battery_hamiltonian(p, atoms);
        CHECK(std::abs((h_b.mat * rho_b.mat).trace().real()) < 1e-12);   // E_B(0) = 0

        // product state: rho_B is the projector onto (N,0,0)
        CHECK(rho_b.mat(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

        const Hamiltonians h = build_hamiltonians(p, cavity, atoms);
        const double e =
            psi.amps.dot((h.h_charger.mat + h.h_battery.mat) * psi.amps).real();
        CHECK(e == doctest::Approx(4.0).epsilon(1e-6));
    }
}

TEST_CASE("sparse Hamiltonian assembly matches the dense builder") {
    ModelParams p = params_n(2, ChargerKind::coherent);
    p.g12 = 1.3;
    p.g23 = 0.4;
    p.n_max = 9;
    const CavityBasis cavity(9);
    const AtomBasis atoms = hilbert::enumerate_atom_basis(2);
    const Hamiltonians dense = build_hamiltonians(p, cavity, atoms);
    const sparse::CsrMatrix csr = build_sparse_hamiltonian(p, cavity, atoms);
    CHECK((csr.to_dense() - dense.h_total.mat.real()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(dense.h_total.mat.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectrum is invariant under coupling sign flips") {
    ModelParams p = params_n(2, ChargerKind::fock);
    p.n_max = 8;
    const CavityBasis cavity(8);
    const AtomBasis atoms = hilbert::enumerate_atom_basis(2);
    const HamiltonianParts parts = build_hamiltonian_parts(p, cavity, atoms);

    const double g12 = 0.9, g23 = 0.6;
    const VectorXd ref = la::eigvals_real(parts.assemble(g12, g23).to_dense());
    for (auto [s12, s23] : {std::pair{-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}}) {
        const VectorXd flipped = la::eigvals_real(parts.assemble(s12 * g12, s23 * g23).to_dense());
        CHECK((ref - flipped).cwiseAbs().maxCoeff() < 1e-9);
    }
}
