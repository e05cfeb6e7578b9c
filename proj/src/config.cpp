#include "cavhhg/config.hpp"

#include "cavhhg/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cavhhg {

using nlohmann::json;

ResonanceOptions SolverConfig::options(StateLabel label) const {
    ResonanceOptions o;
    o.label = label;
    o.overlap_floor = label == StateLabel::FLe ? overlap_floor_excited : overlap_floor_ground;
    o.krylov_dim = krylov_dim;
    o.krylov_wanted = krylov_wanted;
    o.residual_tol = residual_tol;
    o.shift_offset = cplx(0.0, shift_offset_imag);
    o.dense_threshold = dense_threshold;
    o.memory_budget = memory_budget_mib << 20;
    return o;
}

SweepConfig::SweepConfig() {
    for (int k = 0; k <= 30; ++k) eps_values.push_back(0.01 * k);
}

SpectralFilter FilterConfig::filter(int max_order) const {
    SpectralFilter f = block_odd ? SpectralFilter::odd_integers(max_order + 2, tolerance) : SpectralFilter{};
    f.tolerance = tolerance;
    f.blocked_orders.insert(f.blocked_orders.end(), blocked_orders.begin(), blocked_orders.end());
    return f;
}

RunConfig::RunConfig() {
    atom.softcore_width = calibrated_softcore_width;
    CavityEntry c;
    c.omega_ratio = 6.45;
    c.cavity.coupling = 0.229;
    c.cavity.frequency = c.omega_ratio * drive.frequency;
    cavities.push_back(c);
}

FloquetProblem RunConfig::problem() const { return {atom, grid, scaling, drive, basis}; }

CavityChain RunConfig::chain() const {
    CavityChain ch;
    for (const auto& c : cavities) ch.cavities.push_back(c.cavity);
    return ch;
}

double omega_from_wavelength_nm(double nm) { return 45.5634 / nm; }
double field_from_intensity_W_cm2(double intensity) { return std::sqrt(intensity / 3.50945e16); }

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json RunConfig::physics_json() const {
    json j;
    j["atom"] = {{"softcore_depth", atom.softcore_depth}, {"softcore_width", atom.softcore_width}};
    j["grid"] = {{"extent", grid.extent}, {"points", grid.points}, {"fd_order", grid.fd_order}};
    j["scaling"] = {{"theta", scaling.theta}};
    j["drive"] = {{"amplitude", drive.amplitude}, {"frequency", drive.frequency}};
    j["basis"] = {{"channel_min", basis.channel_min}, {"channel_max", basis.channel_max}};
    j["solver"] = {{"overlap_floor_ground", solver.overlap_floor_ground},
                   {"overlap_floor_excited", solver.overlap_floor_excited},
                   {"krylov_dim", solver.krylov_dim},
                   {"krylov_wanted", solver.krylov_wanted},
                   {"residual_tol", solver.residual_tol},
                   {"shift_offset_imag", solver.shift_offset_imag},
                   {"dense_threshold", solver.dense_threshold},
                   {"memory_budget_mib", solver.memory_budget_mib}};
    j["spectrum"] = {{"max_order", spectrum.max_order}, {"dipole_form", to_string(spectrum.dipole_form)}};
    j["cavities"] = json::array();
    for (const auto& c : cavities) {
        json e = {{"omega_ratio", c.omega_ratio}, {"coupling", c.cavity.coupling}, {"phase", c.cavity.phase}};
        if (c.cavity.delta_m_override) e["delta_m_override"] = *c.cavity.delta_m_override;
        j["cavities"].push_back(e);
    }
    j["sweep"] = {{"omega_ratios", sweep.omega_ratios}, {"eps_values", sweep.eps_values}};
    j["pulse"] = {{"window_min_order", pulse.window_min_order}, {"samples_per_T0", pulse.samples_per_T0},
                  {"num_periods", pulse.num_periods},           {"keep_phase", pulse.keep_phase},
                  {"peak_fraction", pulse.peak_fraction},       {"min_separation", pulse.min_separation}};
    j["filter"] = {{"block_odd", filter.block_odd}, {"blocked_orders", filter.blocked_orders},
                   {"tolerance", filter.tolerance}};
    j["tdse"] = {{"time_step", tdse.time_step},
                 {"num_periods", tdse.num_periods},
                 {"ramp_periods", tdse.ramp_periods},
                 {"absorber_width", tdse.absorber_width},
                 {"absorber_strength", tdse.absorber_strength},
                 {"max_norm_loss", tdse.max_norm_loss},
                 {"normalization_radius", tdse.normalization_radius},
                 {"max_order", tdse.max_order},
                 {"orders_per_unit", tdse.orders_per_unit}};
    j["merge_tolerance"] = merge_tolerance;
    return j;
}

json RunConfig::to_json() const {
    json j = physics_json();
    j["output_dir"] = output_dir;
    j["cache"] = {{"enabled", cache_enabled}, {"dir", cache_dir}};
    return j;
}

std::string RunConfig::digest() const { return hex64(fnv1a64(physics_json().dump())); }

void RunConfig::validate() const {
    std::vector<std::string> errs;
    auto collect = [&](auto&& f) {
        try {
            f();
        } catch (const ConfigError& e) {
            errs.insert(errs.end(), e.violations().begin(), e.violations().end());
        }
    };
    collect([&] { problem().validate(); });
    if (!cavities.empty()) collect([&] { chain().validate(drive.frequency); });
    collect([&] { pulse.validate(); });
    collect([&] { tdse.validate(grid, drive); });
    collect([&] { filter.filter(spectrum.max_order).validate(); });
    const int span = basis.channels() - 1;
    if (spectrum.max_order < 1) errs.push_back("spectrum.max_order must be >= 1");
    else if (spectrum.max_order > span)
        errs.push_back("spectrum.max_order exceeds the channel span " + std::to_string(span));
    if (solver.krylov_dim < 2) errs.push_back("solver.krylov_dim must be >= 2");
    if (solver.krylov_wanted < 1 || solver.krylov_wanted >= solver.krylov_dim)
        errs.push_back("solver.krylov_wanted must lie in [1, krylov_dim)");
    if (!(solver.residual_tol > 0.0)) errs.push_back("solver.residual_tol must be > 0");
    if (!(solver.overlap_floor_ground >= 0.0 && solver.overlap_floor_ground <= 1.0))
        errs.push_back("solver.overlap_floor_ground must lie in [0, 1]");
    if (!(solver.overlap_floor_excited >= 0.0 && solver.overlap_floor_excited <= 1.0))
        errs.push_back("solver.overlap_floor_excited must lie in [0, 1]");
    if (sweep.omega_ratios.empty()) errs.push_back("sweep.omega_ratios must be nonempty");
    if (sweep.eps_values.empty()) errs.push_back("sweep.eps_values must be nonempty");
    for (double e : sweep.eps_values)
        if (!(e >= 0.0)) errs.push_back("sweep.eps_values entries must be >= 0");
    for (double w : sweep.omega_ratios)
        if (!(w > 0.0)) errs.push_back("sweep.omega_ratios entries must be > 0");
    if (!(merge_tolerance > 0.0)) errs.push_back("merge_tolerance must be > 0");
    if (output_dir.empty()) errs.push_back("output_dir must be nonempty");
    if (!errs.empty()) throw ConfigError(errs);
}

namespace {

// Strict reader over one JSON object: every key must be consumed.
class Section {
public:
    Section(const json* j, std::string path, std::vector<std::string>& errs)
        : j_(j), path_(std::move(path)), errs_(errs) {
        if (j_ && !j_->is_object()) {
            errs_.push_back(path_ + " must be an object");
            j_ = nullptr;
        }
    }

    bool has(const char* key) const { return j_ && j_->contains(key); }

    Section sub(const char* key) {
        seen_.insert(key);
        return Section(has(key) ? &(*j_)[key] : nullptr, name(key), errs_);
    }

    void get(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (v->is_number()) out = v->get<double>();
            else errs_.push_back(name(key) + " must be a number");
        }
    }
    void get(const char* key, int& out) {
        if (const json* v = take(key)) {
            if (v->is_number_integer()) out = v->get<int>();
            else errs_.push_back(name(key) + " must be an integer");
        }
    }
    void get(const char* key, std::size_t& out) {
        if (const json* v = take(key)) {
            if (v->is_number_unsigned()) out = v->get<std::size_t>();
            else errs_.push_back(name(key) + " must be a non-negative integer");
        }
    }
    void get(const char* key, bool& out) {
        if (const json* v = take(key)) {
            if (v->is_boolean()) out = v->get<bool>();
            else errs_.push_back(name(key) + " must be a boolean");
        }
    }
    void get(const char* key, std::string& out) {
        if (const json* v = take(key)) {
            if (v->is_string()) out = v->get<std::string>();
            else errs_.push_back(name(key) + " must be a string");
        }
    }
    void get(const char* key, std::vector<double>& out) {
        if (const json* v = take(key)) {
            bool ok = v->is_array();
            if (ok)
                for (const auto& x : *v) ok = ok && x.is_number();
            if (ok) out = v->get<std::vector<double>>();
            else errs_.push_back(name(key) + " must be an array of numbers");
        }
    }
    void get(const char* key, std::optional<double>& out) {
        if (const json* v = take(key)) {
            if (v->is_number()) out = v->get<double>();
            else if (!v->is_null()) errs_.push_back(name(key) + " must be a number");
        }
    }

    const json* take(const char* key) {
        seen_.insert(key);
        return has(key) ? &(*j_)[key] : nullptr;
    }

    void finish() {
        if (!j_) return;
        for (auto it = j_->begin(); it != j_->end(); ++it)
            if (!seen_.count(it.key())) errs_.push_back("unknown key " + name(it.key().c_str()));
    }

    std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const json* j_;
    std::string path_;
    std::vector<std::string>& errs_;
    std::set<std::string> seen_;
};

} // namespace

RunConfig parse_config(const json& j) {
    std::vector<std::string> errs;
    RunConfig c;
    Section root(&j, "", errs);

    {
        Section s = root.sub("atom");
        s.get("softcore_depth", c.atom.softcore_depth);
        const bool width = s.has("softcore_width");
        s.get("softcore_width", c.atom.softcore_width);
        s.get("target_ground_energy", c.atom.target_ground_energy);
        if (width && c.atom.target_ground_energy)
            errs.push_back("atom: give either softcore_width or target_ground_energy, not both");
        s.finish();
    }
    {
        Section s = root.sub("grid");
        s.get("extent", c.grid.extent);
        s.get("points", c.grid.points);
        s.get("fd_order", c.grid.fd_order);
        s.finish();
    }
    {
        Section s = root.sub("scaling");
        s.get("theta", c.scaling.theta);
        s.finish();
    }
    {
        Section s = root.sub("drive");
        if (s.has("frequency") && s.has("wavelength_nm"))
            errs.push_back("drive: give either frequency or wavelength_nm, not both");
        if (s.has("amplitude") && s.has("intensity_W_cm2"))
            errs.push_back("drive: give either amplitude or intensity_W_cm2, not both");
        s.get("amplitude", c.drive.amplitude);
        s.get("frequency", c.drive.frequency);
        std::optional<double> nm, intensity;
        s.get("wavelength_nm", nm);
        s.get("intensity_W_cm2", intensity);
        if (nm) {
            if (*nm > 0.0) c.drive.frequency = omega_from_wavelength_nm(*nm);
            else errs.push_back("drive.wavelength_nm must be > 0");
        }
        if (intensity) {
            if (*intensity >= 0.0) c.drive.amplitude = field_from_intensity_W_cm2(*intensity);
            else errs.push_back("drive.intensity_W_cm2 must be >= 0");
        }
        s.finish();
    }
    {
        Section s = root.sub("basis");
        s.get("channel_min", c.basis.channel_min);
        s.get("channel_max", c.basis.channel_max);
        s.finish();
    }
    {
        Section s = root.sub("solver");
        s.get("overlap_floor_ground", c.solver.overlap_floor_ground);
        s.get("overlap_floor_excited", c.solver.overlap_floor_excited);
        s.get("krylov_dim", c.solver.krylov_dim);
        s.get("krylov_wanted", c.solver.krylov_wanted);
        s.get("residual_tol", c.solver.residual_tol);
        s.get("shift_offset_imag", c.solver.shift_offset_imag);
        s.get("dense_threshold", c.solver.dense_threshold);
        s.get("memory_budget_mib", c.solver.memory_budget_mib);
        s.finish();
    }
    {
        Section s = root.sub("spectrum");
        s.get("max_order", c.spectrum.max_order);
        std::string form = to_string(c.spectrum.dipole_form);
        s.get("dipole_form", form);
        try {
            c.spectrum.dipole_form = dipole_form_from_string(form);
        } catch (const ConfigError& e) {
            errs.insert(errs.end(), e.violations().begin(), e.violations().end());
        }
        s.finish();
    }
    if (const json* cav = root.take("cavities")) {
        c.cavities.clear();
        if (!cav->is_array()) {
            errs.push_back("cavities must be an array");
        } else {
            for (std::size_t k = 0; k < cav->size(); ++k) {
                Section s(&(*cav)[k], "cavities[" + std::to_string(k) + "]", errs);
                CavityEntry e;
                if (s.has("omega_ratio") == s.has("frequency"))
                    errs.push_back(s.name("") + " needs exactly one of omega_ratio or frequency");
                double freq = 0.0;
                s.get("omega_ratio", e.omega_ratio);
                s.get("frequency", freq);
                s.get("coupling", e.cavity.coupling);
                s.get("phase", e.cavity.phase);
                s.get("delta_m_override", e.cavity.delta_m_override);
                s.finish();
                c.cavities.push_back(e);
                if (freq > 0.0) c.cavities.back().omega_ratio = freq / c.drive.frequency;
            }
        }
    }
    for (auto& e : c.cavities) e.cavity.frequency = e.omega_ratio * c.drive.frequency;
    {
        Section s = root.sub("sweep");
        s.get("omega_ratios", c.sweep.omega_ratios);
        s.get("eps_values", c.sweep.eps_values);
        s.finish();
    }
    {
        Section s = root.sub("pulse");
        s.get("window_min_order", c.pulse.window_min_order);
        s.get("samples_per_T0", c.pulse.samples_per_T0);
        s.get("num_periods", c.pulse.num_periods);
        s.get("keep_phase", c.pulse.keep_phase);
        s.get("peak_fraction", c.pulse.peak_fraction);
        s.get("min_separation", c.pulse.min_separation);
        s.finish();
    }
    {
        Section s = root.sub("filter");
        s.get("block_odd", c.filter.block_odd);
        s.get("blocked_orders", c.filter.blocked_orders);
        s.get("tolerance", c.filter.tolerance);
        s.finish();
    }
    {
        Section s = root.sub("tdse");
        s.get("time_step", c.tdse.time_step);
        s.get("num_periods", c.tdse.num_periods);
        s.get("ramp_periods", c.tdse.ramp_periods);
        s.get("absorber_width", c.tdse.absorber_width);
        s.get("absorber_strength", c.tdse.absorber_strength);
        s.get("max_norm_loss", c.tdse.max_norm_loss);
        s.get("normalization_radius", c.tdse.normalization_radius);
        s.get("max_order", c.tdse.max_order);
        s.get("orders_per_unit", c.tdse.orders_per_unit);
        s.finish();
    }
    root.get("merge_tolerance", c.merge_tolerance);
    root.get("output_dir", c.output_dir);
    {
        Section s = root.sub("cache");
        s.get("enabled", c.cache_enabled);
        s.get("dir", c.cache_dir);
        s.finish();
    }
    root.finish();

    try {
        c.validate();
    } catch (const ConfigError& e) {
        errs.insert(errs.end(), e.violations().begin(), e.violations().end());
    }
    if (!errs.empty()) throw ConfigError(errs);

    if (c.atom.target_ground_energy) {
        c.atom.softcore_width =
            calibrate_softcore_width(c.atom, c.grid, *c.atom.target_ground_energy);
        c.atom.target_ground_energy.reset();
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

} // namespace cavhhg
