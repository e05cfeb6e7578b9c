#pragma once

#include "cavhhg/cavity.hpp"

#include <string>
#include <vector>

namespace cavhhg {

// Everything a cavity needs from the cavity-free atom: the two resonances,
// their coupling dipole and their harmonic spectra.
struct CavityInputs {
    cplx eps_g, eps_e, d_ge;
    HarmonicSpectrum A_g, A_e;
    double omega0 = 0.0;

    static CavityInputs from_states(const FloquetEigenstate& g, const FloquetEigenstate& e,
                                    int M_max, DipoleForm form = DipoleForm::acceleration);
};

struct CavityChain {
    std::vector<CavityConfig> cavities;

    void validate(double omega0) const;
};

struct SpectralFilter {
    std::vector<double> blocked_orders;
    double tolerance = 1e-9;

    void validate() const;
    static SpectralFilter odd_integers(int max_order, double tolerance = 1e-9);
};

CavitySpectrum single_cavity(const CavityConfig& cavity, const CavityInputs& in, int M_max,
                             double merge_tol = 1e-9);

// Members evaluated independently (each atom starts in FLg) and their
// amplitudes summed order by order.
HarmonicSpectrum chain_spectrum(const CavityChain& chain, const CavityInputs& in, int M_max,
                                double merge_tol = 1e-9);

struct SweepPoint {
    double omega_ratio = 0.0; // omega_cav / omega0
    double eps_cav = 0.0;
    double total = 0.0;
    double delta_m = 0.0;
    std::string status = "ok";
};

// Row-major over (omega_ratios, eps_values): omega is the slow index. Each
// point is independent; failures are recorded in `status` and the sweep goes on.
std::vector<SweepPoint> sweep_total_intensity(const CavityConfig& tmpl,
                                              const std::vector<double>& eps_values,
                                              const std::vector<double>& omega_ratios,
                                              const CavityInputs& in, int M_max,
                                              bool parallel = true);

HarmonicSpectrum apply_filter(const HarmonicSpectrum& spec, const SpectralFilter& filter);

} // namespace cavhhg
