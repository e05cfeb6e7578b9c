#include "cavhhg/pipeline.hpp"

#include "cavhhg/errors.hpp"
#include "cavhhg/version.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace cavhhg {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Pipeline::Pipeline(RunConfig config, bool use_cache) : config_(std::move(config)) {
    if (use_cache && config_.cache_enabled)
        cache_.emplace(EigenstateCache::resolve_root(config_.cache_dir,
                                                     fs::path(config_.output_dir) / "cache"));
}

const FloquetEigenstate& Pipeline::state(StateLabel label, std::optional<FloquetEigenstate>& slot) {
    if (!slot) {
        const auto opts = config_.solver.options(label);
        slot = cache_ ? cache_->get_or_solve(config_.problem(), opts)
                      : solve_labelled(config_.problem(), label, opts);
    }
    return *slot;
}

const FloquetEigenstate& Pipeline::ground() { return state(StateLabel::FLg, ground_); }
const FloquetEigenstate& Pipeline::excited() { return state(StateLabel::FLe, excited_); }

const CavityInputs& Pipeline::inputs() {
    if (!inputs_)
        inputs_ = CavityInputs::from_states(ground(), excited(), config_.spectrum.max_order,
                                            config_.spectrum.dipole_form);
    return *inputs_;
}

HarmonicSpectrum Pipeline::no_cavity_spectrum() {
    if (inputs_) return inputs_->A_g;
    return spectrum(ground(), config_.spectrum.max_order, config_.spectrum.dipole_form);
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json complex_json(cplx z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

void write_json(const fs::path& path, const ordered_json& j) { open_out(path) << j.dump(2) << "\n"; }

// Every artifact opens with the same provenance block.
ordered_json header(const RunConfig& c, const std::string& source) {
    ordered_json j;
    j["source"] = source;
    j["digest"] = c.digest();
    j["version"] = tool_version;
    return j;
}

OutputMetadata meta(const RunConfig& c, const std::string& source = "floquet") {
    OutputMetadata m;
    m.source = source;
    m.digest = c.digest();
    return m;
}

void write_spectrum_pair(const fs::path& dir, const std::string& stem, const HarmonicSpectrum& s,
                         const OutputMetadata& m, bool tags) {
    auto csv = open_out(dir / (stem + ".csv"));
    write_spectrum_csv(csv, s, m, tags);
    auto js = open_out(dir / (stem + ".json"));
    write_spectrum_json(js, s, m);
}

ordered_json state_json(const FloquetEigenstate& s) {
    ordered_json j;
    j["label"] = to_string(s.label);
    j["quasienergy"] = complex_json(s.quasienergy);
    j["width"] = s.width();
    j["symmetry"] = to_string(s.symmetry);
    j["symmetry_residual"] = s.symmetry_residual;
    j["target_overlap"] = complex_json(s.target_overlap);
    j["residual"] = s.residual;
    j["extended_norm"] = complex_json(s.extended_norm());
    ordered_json weights = ordered_json::array();
    for (int n = s.channel_min(); n <= s.channel_max(); ++n) {
        const CVector phi = s.channel(n);
        weights.push_back({{"n", n}, {"norm", phi.norm()}});
    }
    j["channel_norms"] = std::move(weights);
    return j;
}

ordered_json polariton_json(const PolaritonPair& p) {
    ordered_json j;
    j["detuning"] = complex_json(p.detuning);
    j["rabi"] = complex_json(p.rabi);
    j["splitting"] = complex_json(p.splitting);
    j["eps_plus"] = complex_json(p.eps_plus);
    j["eps_minus"] = complex_json(p.eps_minus);
    j["a_plus"] = complex_json(p.a_plus);
    j["a_minus"] = complex_json(p.a_minus);
    j["delta_m"] = p.delta_m;
    j["linewidth"] = p.linewidth;
    j["side_shift"] = p.side_shift;
    j["folded_shift"] = folded_shift(p.side_shift);
    j["weight_g"] = complex_json(p.weight_g());
    j["weight_e"] = complex_json(p.weight_e());
    j["side_weight"] = complex_json(p.side_weight());
    return j;
}

void cmd_eigen(Pipeline& p, const fs::path& dir) {
    const RunConfig& c = p.config();
    ordered_json j = header(c, "floquet");
    j["ground"] = state_json(p.ground());
    j["excited"] = state_json(p.excited());
    j["d_ge"] = complex_json(p.inputs().d_ge);
    write_json(dir / "eigenstates.json", j);
}

void cmd_spectrum(Pipeline& p, const fs::path& dir) {
    const RunConfig& c = p.config();
    auto m = meta(c);
    m.extra["dipole_form"] = to_string(c.spectrum.dipole_form);
    m.extra["state"] = "FLg";
    write_spectrum_pair(dir, "spectrum", p.no_cavity_spectrum(), m, false);
}

void cmd_cavity(Pipeline& p, const fs::path& dir) {
    const RunConfig& c = p.config();
    if (c.cavities.empty()) throw ConfigError("the cavity command needs at least one cavity");
    const CavityInputs& in = p.inputs();
    for (std::size_t k = 0; k < c.cavities.size(); ++k) {
        const CavityConfig& cav = c.cavities[k].cavity;
        const PolaritonPair pair = polariton_solve(in.eps_g, in.eps_e, cav, in.d_ge, in.omega0);
        const CavitySpectrum cs =
            cavity_spectrum(pair, in.A_g, in.A_e, c.spectrum.max_order, cav.phase, c.merge_tolerance);
        const std::string stem = "cavity_" + std::to_string(k);
        auto m = meta(c);
        m.extra["omega_ratio"] = num(c.cavities[k].omega_ratio);
        m.extra["eps_cav"] = num(cav.coupling);
        m.extra["side_shift"] = num(pair.side_shift);
        auto csv = open_out(dir / (stem + ".csv"));
        write_spectrum_csv(csv, cs.composed, m, true);
        ordered_json j = header(c, "floquet");
        j["omega_ratio"] = c.cavities[k].omega_ratio;
        j["eps_cav"] = cav.coupling;
        j["polariton"] = polariton_json(pair);
        j["total_intensity"] = total_intensity(cs.composed);
        j["no_cavity_total_intensity"] = total_intensity(in.A_g);
        write_json(dir / (stem + ".json"), j);
    }
}

HarmonicSpectrum chain_of(Pipeline& p) {
    const RunConfig& c = p.config();
    return chain_spectrum(c.chain(), p.inputs(), c.spectrum.max_order, c.merge_tolerance);
}

void cmd_chain(Pipeline& p, const fs::path& dir) {
    const RunConfig& c = p.config();
    if (c.cavities.empty()) throw ConfigError("the chain command needs at least one cavity");
    auto m = meta(c);
    m.extra["cavities"] = std::to_string(c.cavities.size());
    write_spectrum_pair(dir, "chain", chain_of(p), m, true);
}

void cmd_sweep(Pipeline& p, const fs::path& dir) {
    const RunConfig& c = p.config();
    CavityConfig tmpl;
    if (!c.cavities.empty()) tmpl.phase = c.cavities.front().cavity.phase;
    const CavityInputs& in = p.inputs();
    const auto rows = sweep_total_intensity(tmpl, c.sweep.eps_values, c.sweep.omega_ratios, in,
                                            c.spectrum.max_order);
    auto os = open_out(dir / "sweep.csv");
    os << "# source=floquet digest=" << c.digest() << " version=" << tool_version
       << " no_cavity_total=" << num(total_intensity(in.A_g)) << "\n";
    os << "omega_cav_over_omega0,eps_cav,I_tot,status\n";
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& r : rows) {
        os << num(r.omega_ratio) << ',' << num(r.eps_cav) << ',' << num(r.total) << ',' << r.status << "\n";
        if (r.status == "ok" && r.total > 0.0) {
            lo = any ? std::min(lo, r.total) : r.total;
            hi = any ? std::max(hi, r.total) : r.total;
            any = true;
        }
    }
    ordered_json j = header(c, "floquet");
    j["points"] = rows.size();
    j["no_cavity_total"] = total_intensity(in.A_g);
    j["min_total"] = lo;
    j["max_total"] = hi;
    j["max_over_min"] = any && lo > 0.0 ? hi / lo : 0.0;
    write_json(dir / "sweep.json", j);
}

void write_pulse(const RunConfig& c, const HarmonicSpectrum& spec, const fs::path& dir) {
    const PulseTrain train = synthesize_train(spec, c.pulse);
    auto os = open_out(dir / "pulse.csv");
    os << "# source=floquet digest=" << c.digest() << " version=" << tool_version
       << " window_min_order=" << num(c.pulse.window_min_order) << "\n";
    os << "t_over_T0,intensity\n";
    for (std::size_t i = 0; i < train.times.size(); ++i)
        os << num(train.times[i]) << ',' << num(train.intensity[i]) << "\n";

    ordered_json j = header(c, "floquet");
    j["window_min_order"] = c.pulse.window_min_order;
    j["samples_per_T0"] = train.samples_per_T0;
    j["num_periods"] = train.num_periods;
    j["peaks"] = train.peaks;
    if (train.peaks.size() >= 2) {
        const SpacingResult s = measure_spacing(train);
        j["spacing"] = s.spacing;
        j["spread"] = s.spread;
    }
    const LagPeak lag = dominant_lag(train);
    j["dominant_lag"] = lag.lag;
    j["dominant_lag_value"] = lag.value;
    j["sub_pulse_offsets"] = sub_pulse_offsets(train);
    write_json(dir / "peaks.json", j);
}

// Without cavities the train is synthesised from the cavity-free spectrum.
HarmonicSpectrum pulse_source(Pipeline& p) {
    const RunConfig& c = p.config();
    const HarmonicSpectrum s = c.cavities.empty() ? p.no_cavity_spectrum() : chain_of(p);
    return apply_filter(s, c.filter.filter(c.spectrum.max_order));
}

void cmd_oracle(const RunConfig& c, const fs::path& dir) {
    const TdseResult r = propagate_and_spectrum(c.atom, c.grid, c.drive, c.tdse);
    auto m = meta(c, "tdse");
    m.extra["ground_energy"] = num(r.ground_energy);
    m.extra["final_norm"] = num(r.final_norm);
    auto csv = open_out(dir / "oracle.csv");
    write_spectrum_csv(csv, r.spectrum, m, false);
    ordered_json j = header(c, "tdse");
    j["ground_energy"] = r.ground_energy;
    j["final_norm"] = r.final_norm;
    ordered_json peaks = ordered_json::array();
    for (int M = 1; M <= static_cast<int>(c.tdse.max_order); ++M)
        peaks.push_back({{"order", M}, {"intensity", r.intensity_at(M)}});
    j["integer_orders"] = std::move(peaks);
    write_json(dir / "oracle.json", j);
}

void write_resolved(const RunConfig& c, const fs::path& dir) {
    write_json(dir / "config.json", ordered_json::parse(c.to_json().dump()));
}

void run_panel(const std::string& panel, const RunConfig& base, const CommandOptions& o) {
    const RunConfig c = panel_config(base, panel, o.figure_shifts);
    const fs::path dir = o.out_dir / panel;
    RunConfig cached = c;
    cached.output_dir = o.out_dir.string();
    Pipeline p(cached, o.use_cache);
    write_resolved(c, dir);
    if (panel == "a") cmd_sweep(p, dir);
    else if (panel == "b1") cmd_spectrum(p, dir);
    else if (panel == "b2" || panel == "b3") cmd_cavity(p, dir);
    else if (panel[0] == 'c') write_pulse(c, pulse_source(p), dir);
    else cmd_chain(p, dir);
}

} // namespace

RunConfig panel_config(const RunConfig& base, const std::string& panel, bool figure_shifts) {
    if (std::find(panel_names().begin(), panel_names().end(), panel) == panel_names().end())
        throw ConfigError("unknown panel '" + panel + "'");
    RunConfig c = base;
    auto cavity = [&](double ratio, double eps, double shift) {
        CavityEntry e;
        e.omega_ratio = ratio;
        e.cavity.frequency = ratio * c.drive.frequency;
        e.cavity.coupling = eps;
        if (figure_shifts) e.cavity.delta_m_override = shift;
        return e;
    };
    c.filter = FilterConfig{};
    if (panel == "b1" || panel == "c1") {
        c.cavities.clear();
    } else if (panel == "b2" || panel == "c2") {
        c.cavities = {cavity(6.45, 0.229, 1.0)};
    } else if (panel == "b3" || panel == "c3" || panel == "c4") {
        c.cavities = {cavity(6.45, 0.235, 0.5)};
        c.filter.block_odd = panel == "c4";
    } else if (panel == "d1") {
        c.cavities = {cavity(6.45, 0.229, 1.0), cavity(6.45, 0.235, 0.5)};
    } else if (panel == "d2") {
        c.cavities.clear();
        for (int k = 0; k < 10; ++k) c.cavities.push_back(cavity(6.45, 0.238 + 0.002 * k, 0.1 * (k + 1)));
    }
    c.validate();
    return c;
}

int run_command(const std::string& command, const RunConfig& config, const CommandOptions& o) {
    try {
        if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
            throw ConfigError("unknown command '" + command + "'");
        config.validate();
        if (command == "reproduce") {
            if (o.panel.empty()) throw ConfigError("reproduce needs a panel name");
            run_panel(o.panel, config, o);
            return 0;
        }
        RunConfig c = config;
        c.output_dir = o.out_dir.string();
        Pipeline p(c, o.use_cache);
        const fs::path& dir = o.out_dir;
        if (command == "eigen") cmd_eigen(p, dir);
        else if (command == "spectrum") cmd_spectrum(p, dir);
        else if (command == "cavity") cmd_cavity(p, dir);
        else if (command == "chain") cmd_chain(p, dir);
        else if (command == "sweep") cmd_sweep(p, dir);
        else if (command == "pulse") write_pulse(c, pulse_source(p), dir);
        else cmd_oracle(c, dir);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure in " << e.module() << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cavhhg
