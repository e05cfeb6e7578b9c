#include "cavhhg/cavity.hpp"

#include "cavhhg/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cavhhg {

void CavityConfig::validate(double omega0) const {
    std::vector<std::string> errs;
    if (!(frequency > 0.0)) errs.push_back("cavity.frequency must be > 0");
    if (!(coupling >= 0.0)) errs.push_back("cavity.coupling must be >= 0");
    if (!std::isfinite(phase)) errs.push_back("cavity.phase must be finite");
    if (frequency > 0.0 && omega0 > 0.0) {
        const double ratio = frequency / omega0;
        if (std::abs(ratio - std::round(ratio)) < 1e-9) {
            std::ostringstream msg;
            msg << "cavity.frequency / omega0 = " << ratio << " must not be an integer";
            errs.push_back(msg.str());
        }
    }
    if (delta_m_override && !std::isfinite(*delta_m_override))
        errs.push_back("cavity.delta_m_override must be finite");
    if (!errs.empty()) throw ConfigError(errs);
}

double PolaritonPair::kappa_plus(int M) const {
    const double r = (M + side_shift) / M;
    return r * r;
}

double PolaritonPair::kappa_minus(int M) const {
    const double r = (M - side_shift) / M;
    return r * r;
}

std::array<cplx, 2> PolaritonPair::vector_plus() const {
    if (std::abs(a_plus) >= std::abs(a_minus))
        return {a_plus, rabi / (2.0 * splitting * a_plus)};
    return {rabi / (2.0 * splitting * a_minus), a_minus};
}

std::array<cplx, 2> PolaritonPair::vector_minus() const {
    if (std::abs(a_plus) >= std::abs(a_minus))
        return {-rabi / (2.0 * splitting * a_plus), a_plus};
    return {a_minus, -rabi / (2.0 * splitting * a_minus)};
}

cplx coupling_dipole(const FloquetEigenstate& g, const FloquetEigenstate& e) {
    if (g.channel_min() != e.channel_min() || g.channel_max() != e.channel_max() ||
        g.points() != e.points())
        throw std::invalid_argument("coupling_dipole: states differ in channel range or grid");
    const auto& p = g.problem;
    std::vector<cplx> w(static_cast<std::size_t>(p.grid.points));
    const cplx f = p.scaling.factor();
    for (int i = 0; i < p.grid.points; ++i) w[i] = p.grid.x(i) * f;
    return kernels::parallel::cross_channel_sum(g.view(), e.view(), w) * p.grid.spacing();
}

PolaritonPair polariton_solve(cplx eps_g, cplx eps_e, const CavityConfig& cavity, cplx d_ge,
                              double omega0) {
    PolaritonPair p;
    p.h11 = eps_g + cavity.frequency;
    p.h22 = eps_e;
    p.detuning = p.h11 - p.h22;
    p.rabi = 2.0 * cavity.coupling * d_ge;
    p.splitting = std::sqrt(p.detuning * p.detuning + p.rabi * p.rabi);
    if (p.splitting.real() < 0.0) p.splitting = -p.splitting;
    if (p.splitting == cplx{}) {
        std::ostringstream msg;
        msg << "Omega = 0 at detuning " << p.detuning << " and Rabi frequency " << p.rabi;
        throw DegeneratePairError(msg.str());
    }
    const cplx mean = 0.5 * (p.h11 + p.h22);
    p.eps_plus = mean + 0.5 * p.splitting;
    p.eps_minus = mean - 0.5 * p.splitting;
    p.a_plus = std::sqrt((p.splitting + p.detuning) / (2.0 * p.splitting));
    p.a_minus = std::sqrt((p.splitting - p.detuning) / (2.0 * p.splitting));
    p.delta_m = p.splitting.real() / omega0;
    p.linewidth = p.splitting.imag() / omega0;
    p.side_shift = cavity.delta_m_override.value_or(p.delta_m);
    return p;
}

namespace {

const HarmonicAmplitude& need(const HarmonicSpectrum& s, int M, const char* which) {
    const HarmonicAmplitude* a = s.find(M);
    if (!a) {
        std::ostringstream msg;
        msg << "harmonic order " << M << " missing from the " << which << " spectrum";
        throw std::out_of_range(msg.str());
    }
    return *a;
}

} // namespace

std::array<HarmonicAmplitude, 2> side_harmonic_amplitudes(const PolaritonPair& pair,
                                                          const HarmonicSpectrum& A_g,
                                                          const HarmonicSpectrum& A_e, int M) {
    const cplx diff = need(A_g, M, "FLg").amplitude - need(A_e, M, "FLe").amplitude;
    const cplx common = pair.side_weight() * diff;
    return {HarmonicAmplitude{M + pair.side_shift, pair.kappa_plus(M) * common, "side_plus"},
            HarmonicAmplitude{M - pair.side_shift, pair.kappa_minus(M) * common, "side_minus"}};
}

HarmonicAmplitude odd_harmonic_amplitude(const PolaritonPair& pair, const HarmonicSpectrum& A_g,
                                         const HarmonicSpectrum& A_e, int M) {
    const cplx ag = need(A_g, M, "FLg").amplitude;
    const cplx ae = need(A_e, M, "FLe").amplitude;
    const cplx we = pair.weight_e();
    // With no coupling the FLe weight is exactly zero; skip the product so a
    // non-finite A_e cannot leak in.
    const cplx a = we == cplx{} ? ag : pair.weight_g() * ag + we * ae;
    return {static_cast<double>(M), a, "odd"};
}

CavitySpectrum cavity_spectrum(const PolaritonPair& pair, const HarmonicSpectrum& A_g,
                               const HarmonicSpectrum& A_e, int M_max, double phase,
                               double merge_tol) {
    if (M_max < 1) throw std::invalid_argument("cavity_spectrum: M_max must be >= 1");
    const cplx rot = phase == 0.0 ? cplx(1.0, 0.0) : std::polar(1.0, phase);
    const double omega0 = A_g.drive_frequency;
    std::vector<HarmonicAmplitude> odd, side;
    for (int M = 1; M <= M_max; ++M) {
        auto a = odd_harmonic_amplitude(pair, A_g, A_e, M);
        a.amplitude *= rot;
        odd.push_back(a);
        if (M % 2 == 0) continue;
        for (auto s : side_harmonic_amplitudes(pair, A_g, A_e, M)) {
            if (s.amplitude == cplx{} || !(s.order > merge_tol)) continue;
            s.amplitude *= rot;
            side.push_back(s);
        }
    }
    CavitySpectrum out;
    out.odd_part = merge_entries(odd, omega0, merge_tol);
    out.side_part = merge_entries(side, omega0, merge_tol);
    std::vector<HarmonicAmplitude> all = odd;
    all.insert(all.end(), side.begin(), side.end());
    out.composed = merge_entries(std::move(all), omega0, merge_tol);
    return out;
}

double folded_shift(double delta_m) {
    const double r = std::fmod(std::abs(delta_m) + 1.0, 2.0);
    return std::abs(r - 1.0);
}

} // namespace cavhhg
