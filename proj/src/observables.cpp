#include "dicke/observables.hpp"

#include <algorithm>
#include <cmath>

namespace dicke::observables {

using Eigen::VectorXd;
using hilbert::BasisTag;
using hilbert::Matrix;

namespace {

void require_compatible(const DensityMatrix& rho, const Operator& h, const char* who) {
    if (rho.dim() != h.dim())
        throw InvalidParameterError(std::string(who) + ": dimension mismatch");
    if (rho.basis != h.basis)
        throw InvalidParameterError(std::string(who) + ": basis tags differ");
}

// Ascending eigenvalues; a diagonal matrix short-circuits the solver.
VectorXd hermitian_spectrum(const Matrix& m) {
    const Eigen::Index n = m.rows();
    bool diagonal = true;
    for (Eigen::Index r = 0; r < n && diagonal; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            if (r != c && m(r, c) != 0.0) {
                diagonal = false;
                break;
            }
    VectorXd w(n);
    if (diagonal) {
        for (Eigen::Index i = 0; i < n; ++i) w(i) = m(i, i).real();
        std::sort(w.data(), w.data() + n);
        return w;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_spectrum: eigensolver failed");
    return es.eigenvalues();
}

double entropy_from_spectrum(const VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 1e-14) s -= p(i) * std::log2(p(i));
    return s;
}

ErgotropyResult ergotropy_from_spectra(VectorXd rho_desc, const VectorXd& eps_asc, double e_stored) {
    std::sort(rho_desc.data(), rho_desc.data() + rho_desc.size(), std::greater<double>());
    double locked = 0.0;
    for (Eigen::Index i = 0; i < rho_desc.size(); ++i) locked += rho_desc(i) * eps_asc(i);
    double ergo = e_stored - locked;
    if (ergo < 0.0) ergo = 0.0;   // roundoff guard; the true value is >= 0
    return {ergo, locked};
}

} // namespace

double stored_energy(const DensityMatrix& rho_b, const Operator& h_b) {
    require_compatible(rho_b, h_b, "stored_energy");
    return (h_b.mat * rho_b.mat).trace().real();
}

ErgotropyResult ergotropy(const DensityMatrix& rho_b, const Operator& h_b) {
    require_compatible(rho_b, h_b, "ergotropy");
    const VectorXd r = hermitian_spectrum(rho_b.mat);
    if (r.minCoeff() < -1e-8)
        throw InvalidStateError("ergotropy: density matrix has eigenvalue " +
                                std::to_string(r.minCoeff()));
    return ergotropy_from_spectra(r, hermitian_spectrum(h_b.mat), stored_energy(rho_b, h_b));
}

double entropy_bits(const DensityMatrix& rho) {
    return entropy_from_spectrum(hermitian_spectrum(rho.mat));
}

ObservableRecord record(double t, const JointState& state, const Operator& h_b_atomic) {
    if (t < 0.0) throw InvalidParameterError("record: t must be >= 0");
    if (h_b_atomic.basis != BasisTag::atom || h_b_atomic.dim() != state.atom_dim)
        throw InvalidParameterError("record: h_b_atomic does not match the state's atom basis");

    const DensityMatrix rho_b = hilbert::partial_trace(state, BasisTag::atom);
    const VectorXd r = hermitian_spectrum(rho_b.mat);
    if (r.minCoeff() < -1e-8)
        throw InvalidStateError("record: reduced state has eigenvalue " +
                                std::to_string(r.minCoeff()));

    ObservableRecord rec;
    rec.t = t;
    rec.e_stored = stored_energy(rho_b, h_b_atomic);
    const auto split =
        ergotropy_from_spectra(r, hermitian_spectrum(h_b_atomic.mat), rec.e_stored);
    rec.ergotropy = split.ergotropy;
    rec.e_locked = split.locked;
    rec.p_stored = t > 0.0 ? rec.e_stored / t : 0.0;
    rec.p_ergotropy = t > 0.0 ? rec.ergotropy / t : 0.0;
    rec.entropy_bits = entropy_from_spectrum(r);
    rec.ratio = rec.e_stored > 1e-12 ? rec.ergotropy / rec.e_stored : 0.0;
    return rec;
}

TrajectorySummary summarize(const std::vector<ObservableRecord>& records) {
    if (records.empty()) throw InvalidParameterError("summarize: empty trajectory");
    TrajectorySummary s;
    s.e_max = records[0].e_stored;
    s.t_e = records[0].t;
    s.ergo_max = records[0].ergotropy;
    s.t_ergo = records[0].t;
    s.p_max = records[0].p_stored;
    s.t_p = records[0].t;
    s.pergo_max = records[0].p_ergotropy;
    s.t_pergo = records[0].t;
    s.s_at_t_e = records[0].entropy_bits;
    s.s_at_t_p = records[0].entropy_bits;
    for (const auto& r : records) {
        if (r.e_stored > s.e_max) {
            s.e_max = r.e_stored;
            s.t_e = r.t;
            s.s_at_t_e = r.entropy_bits;
        }
        if (r.ergotropy > s.ergo_max) {
            s.ergo_max = r.ergotropy;
            s.t_ergo = r.t;
        }
        if (r.p_stored > s.p_max) {
            s.p_max = r.p_stored;
            s.t_p = r.t;
            s.s_at_t_p = r.entropy_bits;
        }
        if (r.p_ergotropy > s.pergo_max) {
            s.pergo_max = r.p_ergotropy;
            s.t_pergo = r.t;
        }
    }
    s.ratio_e = s.e_max > 0.0 ? s.ergo_max / s.e_max : 0.0;
    s.ratio_p = s.p_max > 0.0 ? s.pergo_max / s.p_max : 0.0;
    return s;
}

} // namespace dicke::observables
