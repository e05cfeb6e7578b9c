#include "cavhhg/hhg_spectrum.hpp"

#include "cavhhg/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cavhhg {

std::string to_string(DipoleForm f) { return f == DipoleForm::length ? "length" : "acceleration"; }

DipoleForm dipole_form_from_string(const std::string& s) {
    if (s == "length") return DipoleForm::length;
    if (s == "acceleration") return DipoleForm::acceleration;
    throw ConfigError("spectrum.dipole_form must be \"length\" or \"acceleration\", got \"" + s + "\"");
}

void HarmonicSpectrum::validate() const {
    for (std::size_t k = 1; k < entries.size(); ++k)
        if (!(entries[k].order > entries[k - 1].order))
            throw std::logic_error("harmonic spectrum orders must be strictly increasing");
}

const HarmonicAmplitude* HarmonicSpectrum::find(double order, double tol) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), order - tol,
                               [](const HarmonicAmplitude& a, double o) { return a.order < o; });
    if (it != entries.end() && std::abs(it->order - order) <= tol) return &*it;
    return nullptr;
}

std::vector<double> HarmonicSpectrum::orders() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.order);
    return out;
}

HarmonicSpectrum merge_entries(std::vector<HarmonicAmplitude> entries, double drive_frequency,
                               double tol) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.order < b.order; });
    HarmonicSpectrum out;
    out.drive_frequency = drive_frequency;
    for (auto& e : entries) {
        if (!out.entries.empty() && std::abs(e.order - out.entries.back().order) <= tol) {
            auto& last = out.entries.back();
            last.amplitude += e.amplitude;
            if (!e.tag.empty() && last.tag.find(e.tag) == std::string::npos)
                last.tag = last.tag.empty() ? e.tag : last.tag + "+" + e.tag;
        } else {
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

double length_prefactor(int M, double omega) {
    const double w = M * omega;
    return -w * w;
}

namespace {

std::vector<cplx> coordinate_weight(const FloquetProblem& p) {
    std::vector<cplx> w(static_cast<std::size_t>(p.grid.points));
    const cplx f = p.scaling.factor();
    for (int i = 0; i < p.grid.points; ++i) w[i] = p.grid.x(i) * f;
    return w;
}

std::vector<cplx> force_weight(const FloquetProblem& p) {
    std::vector<cplx> w(static_cast<std::size_t>(p.grid.points));
    const cplx f = p.scaling.factor();
    for (int i = 0; i < p.grid.points; ++i) w[i] = -p.atom.potential_derivative(p.grid.x(i) * f);
    return w;
}

void pair_sums(const FloquetEigenstate& s, const std::vector<cplx>& weight,
               const std::vector<int>& shifts, std::vector<cplx>& out, bool parallel) {
    out.assign(shifts.size(), cplx{});
    if (parallel)
        kernels::parallel::channel_pair_sums(s.view(), weight, shifts, out);
    else
        kernels::serial::channel_pair_sums(s.view(), weight, shifts, out);
    const double h = s.problem.grid.spacing();
    for (auto& v : out) v *= h;
}

void check_order(const FloquetEigenstate& s, int M) {
    const int span = s.channels() - 1;
    if (M < 1 || M > span) {
        std::ostringstream msg;
        msg << "harmonic order " << M << " outside 1.." << span << " allowed by the channel truncation ["
            << s.channel_min() << ", " << s.channel_max() << "]";
        throw std::out_of_range(msg.str());
    }
}

std::vector<cplx> amplitudes(const FloquetEigenstate& s, int M_max, DipoleForm form, bool parallel) {
    check_order(s, M_max);
    const auto& p = s.problem;
    std::vector<int> shifts;
    for (int M = 1; M <= M_max; ++M) shifts.push_back(M);
    std::vector<cplx> out;
    if (form == DipoleForm::length) {
        pair_sums(s, coordinate_weight(p), shifts, out, parallel);
        for (int M = 1; M <= M_max; ++M) out[M - 1] *= length_prefactor(M, p.drive.frequency);
        return out;
    }
    pair_sums(s, force_weight(p), shifts, out, parallel);
    std::vector<int> all;
    for (int K = 0; K <= M_max + 1; ++K) all.push_back(K);
    std::vector<cplx> overlap;
    pair_sums(s, std::vector<cplx>(static_cast<std::size_t>(p.grid.points), cplx(1.0, 0.0)), all,
              overlap, parallel);
    const double half = 0.5 * p.drive.amplitude;
    for (int M = 1; M <= M_max; ++M) out[M - 1] += half * (overlap[M - 1] + overlap[M + 1]);
    return out;
}

} // namespace

cplx harmonic_amplitude(const FloquetEigenstate& state, int M, DipoleForm form) {
    check_order(state, M);
    return amplitudes(state, M, form, false).back();
}

HarmonicSpectrum spectrum(const FloquetEigenstate& state, int M_max, DipoleForm form, bool parallel) {
    if (M_max < 1) throw std::invalid_argument("spectrum: M_max must be >= 1");
    const auto a = amplitudes(state, M_max, form, parallel);
    HarmonicSpectrum out;
    out.drive_frequency = state.problem.drive.frequency;
    for (int M = 1; M <= M_max; ++M) out.entries.push_back({static_cast<double>(M), a[M - 1], {}});
    return out;
}

double total_intensity(const HarmonicSpectrum& spec) {
    double s = 0.0;
    for (const auto& e : spec.entries) s += e.intensity();
    return s;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_spectrum_csv(std::ostream& os, const HarmonicSpectrum& spec, const OutputMetadata& meta,
                        bool with_tags) {
    os << "# source=" << meta.source << " digest=" << meta.digest << " version=" << meta.version
       << " omega0=" << num(spec.drive_frequency) << "\n";
    for (const auto& [k, v] : meta.extra) os << "# " << k << "=" << v << "\n";
    os << "order,re_amplitude,im_amplitude,intensity" << (with_tags ? ",tag" : "") << "\n";
    for (const auto& e : spec.entries) {
        os << num(e.order) << ',' << num(e.amplitude.real()) << ',' << num(e.amplitude.imag()) << ','
           << num(e.intensity());
        if (with_tags) os << ',' << e.tag;
        os << "\n";
    }
}

void write_spectrum_json(std::ostream& os, const HarmonicSpectrum& spec, const OutputMetadata& meta) {
    nlohmann::ordered_json j;
    j["source"] = meta.source;
    j["digest"] = meta.digest;
    j["version"] = meta.version;
    for (const auto& [k, v] : meta.extra) j["metadata"][k] = v;
    j["drive_frequency"] = spec.drive_frequency;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : spec.entries) {
        nlohmann::ordered_json r;
        r["order"] = e.order;
        r["re_amplitude"] = e.amplitude.real();
        r["im_amplitude"] = e.amplitude.imag();
        r["intensity"] = e.intensity();
        if (!e.tag.empty()) r["tag"] = e.tag;
        j["entries"].push_back(std::move(r));
    }
    os << j.dump(2) << "\n";
}

} // namespace cavhhg
