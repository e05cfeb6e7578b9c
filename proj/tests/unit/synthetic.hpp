#pragma once

#include "fixtures.hpp"

#include "cavhhg/chain.hpp"

namespace fixtures {

// Random odd-dominated spectrum on orders 1..M_max.
inline cavhhg::HarmonicSpectrum random_spectrum(Gen& g, int M_max, double even_scale = 1e-8) {
    cavhhg::HarmonicSpectrum s;
    s.drive_frequency = 0.057;
    for (int M = 1; M <= M_max; ++M) {
        const double scale = M % 2 ? 1.0 : even_scale;
        s.entries.push_back({double(M), scale * g.complex(-1, 1), ""});
    }
    return s;
}

inline cavhhg::CavityInputs random_inputs(Gen& g, int M_max) {
    cavhhg::CavityInputs in;
    in.omega0 = 0.057;
    in.eps_g = {g.uniform(-0.5, -0.4), -g.uniform(1e-4, 1e-3)};
    in.eps_e = {g.uniform(-0.25, -0.15), -g.uniform(1e-3, 2e-2)};
    in.d_ge = g.complex(-1.5, 1.5);
    in.A_g = random_spectrum(g, M_max);
    in.A_e = random_spectrum(g, M_max);
    return in;
}

} // namespace fixtures
