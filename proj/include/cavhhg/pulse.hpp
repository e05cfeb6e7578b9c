#pragma once

#include "cavhhg/hhg_spectrum.hpp"

#include <vector>

namespace cavhhg {

struct PulseSpec {
    double window_min_order = 26.0; // strictly above this order
    int samples_per_T0 = 4096;
    int num_periods = 4;
    bool keep_phase = false; // false: transform-limited (all phases zero)
    double peak_fraction = 0.5;
    double min_separation = 0.05; // in T0

    void validate() const;
};

struct PulseTrain {
    std::vector<double> times; // units of T0, t_j = j / samples_per_T0
    std::vector<double> field;
    std::vector<double> intensity;
    std::vector<double> peaks;
    int samples_per_T0 = 0;
    int num_periods = 0;

    double sample_step() const { return 1.0 / samples_per_T0; }
};

// field(t) = sum_k |A_k| cos(2 pi order_k t [+ arg A_k]) over orders above the window.
PulseTrain synthesize_train(const HarmonicSpectrum& spec, const PulseSpec& ps,
                            bool parallel = true);

// Local maxima above `fraction` of the global maximum, at least `min_sep`
// apart (stronger peaks win), returned in time order.
std::vector<double> detect_peaks(const std::vector<double>& times,
                                 const std::vector<double>& values, double fraction,
                                 double min_sep);

struct SpacingResult {
    double spacing = 0.0; // median gap, units of T0
    double spread = 0.0;  // max |gap - median|
};

SpacingResult measure_spacing(const PulseTrain& train);
SpacingResult measure_spacing(const std::vector<double>& peaks);

// Circular intensity autocorrelation normalised to 1 at zero lag; element j is lag j samples.
std::vector<double> autocorrelation(const PulseTrain& train);

struct LagPeak {
    double lag = 0.0; // units of T0
    double value = 0.0;
};

// Strongest local maximum of the autocorrelation with lag in [min_lag, window - min_lag].
LagPeak dominant_lag(const PulseTrain& train, double min_lag = 0.05);

// Local maxima of intensity between `low` and `high` fractions of the global
// maximum, reported as offsets from the nearest main peak.
std::vector<double> sub_pulse_offsets(const PulseTrain& train, double low = 0.05,
                                      double high = 0.5, double min_sep = 0.05);

} // namespace cavhhg
