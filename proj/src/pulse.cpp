#include "cavhhg/pulse.hpp"

#include "cavhhg/errors.hpp"
#include "cavhhg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cavhhg {

void PulseSpec::validate() const {
    std::vector<std::string> errs;
    if (!std::isfinite(window_min_order)) errs.push_back("pulse.window_min_order must be finite");
    if (samples_per_T0 < 1) errs.push_back("pulse.samples_per_T0 must be >= 1");
    if (num_periods < 1) errs.push_back("pulse.num_periods must be >= 1");
    if (!(peak_fraction > 0.0 && peak_fraction < 1.0)) errs.push_back("pulse.peak_fraction must lie in (0, 1)");
    if (!(min_separation > 0.0)) errs.push_back("pulse.min_separation must be > 0");
    if (!errs.empty()) throw ConfigError(errs);
}

PulseTrain synthesize_train(const HarmonicSpectrum& spec, const PulseSpec& ps, bool parallel) {
    ps.validate();
    std::vector<double> order, amp, phase;
    for (const auto& e : spec.entries) {
        if (!(e.order > ps.window_min_order)) continue;
        order.push_back(e.order);
        amp.push_back(std::abs(e.amplitude));
        phase.push_back(ps.keep_phase ? std::arg(e.amplitude) : 0.0);
    }
    if (order.empty()) {
        std::ostringstream msg;
        msg << "no spectral entries above order " << ps.window_min_order;
        throw std::invalid_argument(msg.str());
    }
    const double max_order = *std::max_element(order.begin(), order.end());
    if (!(ps.samples_per_T0 > 2.0 * max_order)) {
        std::ostringstream msg;
        msg << "samples_per_T0 = " << ps.samples_per_T0 << " undersamples order " << max_order
            << "; need more than " << 2.0 * max_order;
        throw std::invalid_argument(msg.str());
    }

    PulseTrain t;
    t.samples_per_T0 = ps.samples_per_T0;
    t.num_periods = ps.num_periods;
    const std::size_t n = static_cast<std::size_t>(ps.samples_per_T0) * ps.num_periods;
    t.times.resize(n);
    for (std::size_t j = 0; j < n; ++j) t.times[j] = static_cast<double>(j) / ps.samples_per_T0;
    t.field.resize(n);
    if (parallel)
        kernels::parallel::cosine_synthesis(order, amp, phase, t.times, t.field);
    else
        kernels::serial::cosine_synthesis(order, amp, phase, t.times, t.field);
    t.intensity.resize(n);
    for (std::size_t j = 0; j < n; ++j) t.intensity[j] = t.field[j] * t.field[j];
    t.peaks = detect_peaks(t.times, t.intensity, ps.peak_fraction, ps.min_separation);
    return t;
}

namespace {

// Indices of local maxima (>= left neighbour, > right neighbour), treating
// the samples as periodic.
std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    const std::size_t n = v.size();
    if (n < 3) return out;
    for (std::size_t j = 0; j < n; ++j) {
        const double l = v[(j + n - 1) % n], r = v[(j + 1) % n];
        if (v[j] >= l && v[j] > r) out.push_back(j);
    }
    return out;
}

std::vector<std::size_t> separated(const std::vector<std::size_t>& cand, const std::vector<double>& times,
                                   const std::vector<double>& values, double min_sep, double period) {
    std::vector<std::size_t> byval = cand;
    std::stable_sort(byval.begin(), byval.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t j : byval) {
        bool ok = true;
        for (std::size_t k : kept) {
            double d = std::abs(times[j] - times[k]);
            if (period > 0.0) d = std::min(d, period - d);
            if (d < min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(j);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double window_length(const std::vector<double>& times) {
    if (times.size() < 2) return 0.0;
    return times.back() + (times[1] - times[0]) - times.front();
}

} // namespace

std::vector<double> detect_peaks(const std::vector<double>& times, const std::vector<double>& values,
                                 double fraction, double min_sep) {
    if (times.size() != values.size()) throw std::invalid_argument("detect_peaks: size mismatch");
    if (values.empty()) return {};
    const double vmax = *std::max_element(values.begin(), values.end());
    std::vector<std::size_t> cand;
    for (std::size_t j : local_maxima(values))
        if (values[j] >= fraction * vmax) cand.push_back(j);
    std::vector<double> out;
    for (std::size_t j : separated(cand, times, values, min_sep, window_length(times)))
        out.push_back(times[j]);
    return out;
}

SpacingResult measure_spacing(const std::vector<double>& peaks) {
    if (peaks.size() < 2) throw std::invalid_argument("measure_spacing: fewer than two peaks");
    std::vector<double> gaps;
    for (std::size_t k = 1; k < peaks.size(); ++k) gaps.push_back(peaks[k] - peaks[k - 1]);
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    SpacingResult r{median, 0.0};
    for (double g : gaps) r.spread = std::max(r.spread, std::abs(g - median));
    return r;
}

SpacingResult measure_spacing(const PulseTrain& train) { return measure_spacing(train.peaks); }

std::vector<double> autocorrelation(const PulseTrain& train) {
    const std::size_t n = train.intensity.size();
    std::vector<double> ac(n, 0.0);
    const auto& v = train.intensity;
#pragma omp parallel for schedule(static)
    for (long lag = 0; lag < static_cast<long>(n); ++lag) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += v[j] * v[(j + static_cast<std::size_t>(lag)) % n];
        ac[static_cast<std::size_t>(lag)] = s;
    }
    if (n > 0 && ac[0] > 0.0) {
        const double z = ac[0];
        for (double& x : ac) x /= z;
    }
    return ac;
}

LagPeak dominant_lag(const PulseTrain& train, double min_lag) {
    const auto ac = autocorrelation(train);
    const double dt = train.sample_step();
    const double window = ac.size() * dt;
    LagPeak best{0.0, -1.0};
    for (std::size_t j : local_maxima(ac)) {
        const double lag = j * dt;
        if (lag < min_lag - 1e-12 || lag > window - min_lag + 1e-12) continue;
        if (ac[j] > best.value) best = {lag, ac[j]};
    }
    if (best.value < 0.0) throw std::runtime_error("dominant_lag: no autocorrelation peak in range");
    return best;
}

std::vector<double> sub_pulse_offsets(const PulseTrain& train, double low, double high,
                                      double min_sep) {
    if (train.peaks.empty()) return {};
    const auto& v = train.intensity;
    const double vmax = *std::max_element(v.begin(), v.end());
    std::vector<std::size_t> cand;
    const double period = window_length(train.times);
    for (std::size_t j : local_maxima(v)) {
        if (v[j] < low * vmax || v[j] >= high * vmax) continue;
        // Ripple on the flank of a main pulse is not a sub-pulse.
        bool near_main = false;
        for (double p : train.peaks) {
            double d = std::abs(train.times[j] - p);
            d = std::min(d, period - d);
            if (d < min_sep) near_main = true;
        }
        if (!near_main) cand.push_back(j);
    }
    std::vector<double> out;
    for (std::size_t j : separated(cand, train.times, v, min_sep, period)) {
        double best = 0.0, bestd = 1e300;
        for (double p : train.peaks) {
            double d = train.times[j] - p;
            d -= period * std::round(d / period);
            if (std::abs(d) < std::abs(bestd)) {
                bestd = d;
                best = d;
            }
        }
        out.push_back(best);
    }
    return out;
}

} // namespace cavhhg
