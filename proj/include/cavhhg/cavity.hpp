#pragma once

#include "cavhhg/floquet.hpp"
#include "cavhhg/hhg_spectrum.hpp"

#include <array>
#include <optional>

namespace cavhhg {

struct CavityConfig {
    double frequency = 0.0; // omega_cav
    double coupling = 0.0;  // eps_cav
    double phase = 0.0;     // relative emission phase when composed in a chain
    // Forces the side-harmonic displacement instead of taking it from Re(Omega).
    std::optional<double> delta_m_override;

    void validate(double omega0) const;
};

// Single-excitation polaritons built from |FLg, 1 photon> and |FLe, 0 photons>.
struct PolaritonPair {
    cplx detuning;  // delta
    cplx rabi;      // Omega0 = 2 eps_cav d_ge
    cplx splitting; // Omega = sqrt(delta^2 + Omega0^2), Re >= 0
    cplx eps_plus, eps_minus;
    cplx a_plus, a_minus;
    double delta_m = 0.0;   // Re(Omega) / omega0
    double linewidth = 0.0; // Im(Omega) / omega0, diagnostic only
    double side_shift = 0.0; // displacement actually used for side orders
    cplx h11, h22;           // diagonal of the 2x2 matrix

    // Weights of A_g and A_e in the odd harmonics; they sum to one.
    cplx weight_g() const { return 1.0 - weight_e(); }
    cplx weight_e() const { return rabi * rabi / (2.0 * splitting * splitting); }
    // Common factor of both side amplitudes, (Omega^2 - delta^2) / (4 Omega^2).
    cplx side_weight() const { return rabi * rabi / (4.0 * splitting * splitting); }

    double kappa_plus(int M) const;
    double kappa_minus(int M) const;

    // Eigenvectors of [[h11, Omega0/2], [Omega0/2, h22]] in the (g, e) basis.
    std::array<cplx, 2> vector_plus() const;
    std::array<cplx, 2> vector_minus() const;
};

struct CavitySpectrum {
    HarmonicSpectrum odd_part;  // integer orders
    HarmonicSpectrum side_part; // orders M +- side_shift around odd M
    HarmonicSpectrum composed;
};

// sum_n (phi_{n,g}| x_theta |phi_{n,e}).
cplx coupling_dipole(const FloquetEigenstate& g, const FloquetEigenstate& e);

PolaritonPair polariton_solve(cplx eps_g, cplx eps_e, const CavityConfig& cavity, cplx d_ge,
                              double omega0);

std::array<HarmonicAmplitude, 2> side_harmonic_amplitudes(const PolaritonPair& pair,
                                                          const HarmonicSpectrum& A_g,
                                                          const HarmonicSpectrum& A_e, int M);

HarmonicAmplitude odd_harmonic_amplitude(const PolaritonPair& pair, const HarmonicSpectrum& A_g,
                                         const HarmonicSpectrum& A_e, int M);

// Odd part on every integer order 1..M_max, side orders around odd M; orders
// within merge_tol are amplitude-summed. Non-positive side orders are dropped,
// as are side entries whose amplitude is exactly zero.
CavitySpectrum cavity_spectrum(const PolaritonPair& pair, const HarmonicSpectrum& A_g,
                               const HarmonicSpectrum& A_e, int M_max, double phase = 0.0,
                               double merge_tol = 1e-9);

// Side peaks at M +- s around all odd M coincide with those of s + 2 and -s,
// so the visible displacement is s folded into [0, 1].
double folded_shift(double delta_m);

} // namespace cavhhg
