#pragma once

#include "cavhhg/cavity.hpp"
#include "cavhhg/chain.hpp"
#include "cavhhg/floquet.hpp"
#include "cavhhg/hhg_spectrum.hpp"
#include "cavhhg/pulse.hpp"
#include "cavhhg/tdse.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cavhhg {

// Soft-core width whose FD8 ground energy on the default grid is -0.4458.
inline constexpr double calibrated_softcore_width = 2.6143772893478037;
inline constexpr double calibration_target_energy = -0.4458;

struct SolverConfig {
    double overlap_floor_ground = 0.5;
    double overlap_floor_excited = 0.5;
    int krylov_dim = 40;
    int krylov_wanted = 12;
    double residual_tol = 1e-8;
    double shift_offset_imag = -1e-4;
    std::size_t dense_threshold = 1000;
    std::size_t memory_budget_mib = 3072;

    ResonanceOptions options(StateLabel label) const;
};

struct SpectrumConfig {
    int max_order = 45;
    DipoleForm dipole_form = DipoleForm::acceleration;
};

struct CavityEntry {
    CavityConfig cavity;      // frequency filled in from omega_ratio
    double omega_ratio = 0.0; // omega_cav / omega0
};

struct SweepConfig {
    std::vector<double> omega_ratios{3.45, 4.45, 5.45, 6.45, 7.45};
    std::vector<double> eps_values;

    SweepConfig();
};

struct FilterConfig {
    bool block_odd = false;
    std::vector<double> blocked_orders;
    double tolerance = 1e-9;

    SpectralFilter filter(int max_order) const;
};

struct RunConfig {
    AtomModel atom;
    SpatialGrid grid;
    ComplexScalingConfig scaling;
    DriveField drive;
    FloquetBasisSpec basis;
    SolverConfig solver;
    SpectrumConfig spectrum;
    std::vector<CavityEntry> cavities;
    SweepConfig sweep;
    PulseSpec pulse;
    FilterConfig filter;
    PropagationConfig tdse;
    double merge_tolerance = 1e-9;
    std::string output_dir = "out";
    bool cache_enabled = true;
    std::string cache_dir; // empty: environment variable, then <output_dir>/cache

    RunConfig();

    FloquetProblem problem() const;
    CavityChain chain() const;

    // Resolved configuration with every default filled in. Output and cache
    // settings are excluded from `physics_json`, which feeds the digest.
    nlohmann::json to_json() const;
    nlohmann::json physics_json() const;
    std::string digest() const;

    // Throws ConfigError listing every violation.
    void validate() const;
};

// Strict parse: unknown keys, wrong types and invariant violations are all
// collected before throwing.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// FNV-1a 64-bit hash of a string, as 16 hex digits.
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// Unit conversions for convenience keys.
double omega_from_wavelength_nm(double nm);
double field_from_intensity_W_cm2(double intensity);

} // namespace cavhhg
