#pragma once

#include "cavhhg/cache.hpp"
#include "cavhhg/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cavhhg {

// Lazily solved shared state for one configuration: the two resonances and
// everything derived from them.
class Pipeline {
public:
    Pipeline(RunConfig config, bool use_cache);

    const RunConfig& config() const { return config_; }
    const FloquetEigenstate& ground();
    const FloquetEigenstate& excited();
    const CavityInputs& inputs();
    HarmonicSpectrum no_cavity_spectrum();

private:
    const FloquetEigenstate& state(StateLabel label, std::optional<FloquetEigenstate>& slot);

    RunConfig config_;
    std::optional<EigenstateCache> cache_;
    std::optional<FloquetEigenstate> ground_, excited_;
    std::optional<CavityInputs> inputs_;
};

struct CommandOptions {
    std::filesystem::path out_dir;
    bool use_cache = true;
    std::string panel;         // reproduce target
    bool figure_shifts = false; // reproduce: impose the displayed side shifts
};

inline const std::vector<std::string>& panel_names() {
    static const std::vector<std::string> names{"a",  "b1", "b2", "b3", "c1",
                                                "c2", "c3", "c4", "d1", "d2"};
    return names;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"eigen", "spectrum", "cavity", "chain",
                                                "sweep", "pulse",    "oracle", "reproduce"};
    return names;
}

// Runs one command and writes its artifacts. Returns the process exit code:
// 0 ok, 2 configuration error, 3 numerical failure. Diagnostics go to stderr.
int run_command(const std::string& command, const RunConfig& config, const CommandOptions& options);

// Configuration used by `reproduce <panel>`.
RunConfig panel_config(const RunConfig& base, const std::string& panel, bool figure_shifts);

} // namespace cavhhg
