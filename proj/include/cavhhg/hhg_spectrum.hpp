#pragma once

#include "cavhhg/floquet.hpp"
#include "cavhhg/version.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cavhhg {

// Length form: -(M omega)^2 sum_n (phi_{n+M}| x_theta |phi_n).
// Acceleration form: sum_n (phi_{n+M}| -V'(x_theta) |phi_n) plus the field
// term (eps0/2)(N_{M-1} + N_{M+1}) with N_K = sum_n (phi_{n+K}|phi_n).
// Both are the M-th Fourier component of the dipole acceleration; the
// acceleration form converges much faster in the channel count.
enum class DipoleForm { length, acceleration };

std::string to_string(DipoleForm f);
DipoleForm dipole_form_from_string(const std::string& s);

struct HarmonicAmplitude {
    double order = 0.0;
    cplx amplitude;
    std::string tag; // odd, side_plus, side_minus, joined with '+' after merging

    double intensity() const { return std::norm(amplitude); }
};

struct HarmonicSpectrum {
    std::vector<HarmonicAmplitude> entries; // strictly increasing order
    double drive_frequency = 0.0;

    void validate() const;
    const HarmonicAmplitude* find(double order, double tol = 1e-9) const;
    std::vector<double> orders() const;
};

// Sorts by order and sums amplitudes whose orders lie within `tol` of the
// first entry of their cluster.
HarmonicSpectrum merge_entries(std::vector<HarmonicAmplitude> entries, double drive_frequency,
                               double tol = 1e-9);

double length_prefactor(int M, double omega);

cplx harmonic_amplitude(const FloquetEigenstate& state, int M,
                        DipoleForm form = DipoleForm::acceleration);

// Orders 1..M_max. `parallel` selects the OpenMP kernel.
HarmonicSpectrum spectrum(const FloquetEigenstate& state, int M_max,
                          DipoleForm form = DipoleForm::acceleration, bool parallel = true);

double total_intensity(const HarmonicSpectrum& spec);

struct OutputMetadata {
    std::string source = "floquet";
    std::string digest;
    std::string version = tool_version;
    std::map<std::string, std::string> extra;
};

// CSV columns: order, re_amplitude, im_amplitude, intensity[, tag].
void write_spectrum_csv(std::ostream& os, const HarmonicSpectrum& spec, const OutputMetadata& meta,
                        bool with_tags = false);
void write_spectrum_json(std::ostream& os, const HarmonicSpectrum& spec, const OutputMetadata& meta);

} // namespace cavhhg
