#include "cavhhg/chain.hpp"

#include "cavhhg/errors.hpp"

#include <cmath>
#include <exception>
#include <sstream>

namespace cavhhg {

CavityInputs CavityInputs::from_states(const FloquetEigenstate& g, const FloquetEigenstate& e,
                                       int M_max, DipoleForm form) {
    CavityInputs in;
    in.eps_g = g.quasienergy;
    in.eps_e = e.quasienergy;
    in.d_ge = coupling_dipole(g, e);
    in.A_g = spectrum(g, M_max, form);
    in.A_e = spectrum(e, M_max, form);
    in.omega0 = g.problem.drive.frequency;
    return in;
}

void CavityChain::validate(double omega0) const {
    if (cavities.empty()) throw ConfigError("cavity chain must contain at least one cavity");
    std::vector<std::string> errs;
    for (std::size_t k = 0; k < cavities.size(); ++k) {
        try {
            cavities[k].validate(omega0);
        } catch (const ConfigError& e) {
            for (const auto& v : e.violations()) errs.push_back("cavities[" + std::to_string(k) + "]: " + v);
        }
    }
    if (!errs.empty()) throw ConfigError(errs);
}

void SpectralFilter::validate() const {
    if (!(tolerance > 0.0)) throw ConfigError("filter.tolerance must be > 0");
}

SpectralFilter SpectralFilter::odd_integers(int max_order, double tolerance) {
    SpectralFilter f;
    f.tolerance = tolerance;
    for (int M = 1; M <= max_order; M += 2) f.blocked_orders.push_back(M);
    return f;
}

CavitySpectrum single_cavity(const CavityConfig& cavity, const CavityInputs& in, int M_max,
                             double merge_tol) {
    const PolaritonPair pair = polariton_solve(in.eps_g, in.eps_e, cavity, in.d_ge, in.omega0);
    return cavity_spectrum(pair, in.A_g, in.A_e, M_max, cavity.phase, merge_tol);
}

HarmonicSpectrum chain_spectrum(const CavityChain& chain, const CavityInputs& in, int M_max,
                                double merge_tol) {
    chain.validate(in.omega0);
    std::vector<CavitySpectrum> members(chain.cavities.size());
    const int count = static_cast<int>(members.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < count; ++k) {
        try {
            members[k] = single_cavity(chain.cavities[k], in, M_max, merge_tol);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    // Ordered reduction: member order fixes the floating-point summation order.
    std::vector<HarmonicAmplitude> all;
    for (const auto& m : members)
        all.insert(all.end(), m.composed.entries.begin(), m.composed.entries.end());
    return merge_entries(std::move(all), in.omega0, merge_tol);
}

std::vector<SweepPoint> sweep_total_intensity(const CavityConfig& tmpl,
                                              const std::vector<double>& eps_values,
                                              const std::vector<double>& omega_ratios,
                                              const CavityInputs& in, int M_max, bool parallel) {
    if (eps_values.empty() || omega_ratios.empty())
        throw ConfigError("sweep requires nonempty eps_cav and omega_cav lists");
    const std::size_t ne = eps_values.size();
    std::vector<SweepPoint> out(ne * omega_ratios.size());
    const long total = static_cast<long>(out.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long k = 0; k < total; ++k) {
        SweepPoint& pt = out[static_cast<std::size_t>(k)];
        pt.omega_ratio = omega_ratios[static_cast<std::size_t>(k) / ne];
        pt.eps_cav = eps_values[static_cast<std::size_t>(k) % ne];
        try {
            CavityConfig c = tmpl;
            c.frequency = pt.omega_ratio * in.omega0;
            c.coupling = pt.eps_cav;
            c.validate(in.omega0);
            const PolaritonPair pair = polariton_solve(in.eps_g, in.eps_e, c, in.d_ge, in.omega0);
            pt.delta_m = pair.delta_m;
            pt.total = total_intensity(cavity_spectrum(pair, in.A_g, in.A_e, M_max, c.phase).composed);
        } catch (const std::exception& e) {
            pt.total = std::nan("");
            std::string msg = e.what();
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            pt.status = "error: " + msg;
        }
    }
    return out;
}

HarmonicSpectrum apply_filter(const HarmonicSpectrum& spec, const SpectralFilter& filter) {
    filter.validate();
    HarmonicSpectrum out;
    out.drive_frequency = spec.drive_frequency;
    for (const auto& e : spec.entries) {
        bool blocked = false;
        for (double o : filter.blocked_orders)
            if (std::abs(e.order - o) <= filter.tolerance) {
                blocked = true;
                break;
            }
        if (!blocked) out.entries.push_back(e);
    }
    return out;
}

} // namespace cavhhg
