#include "cavhhg/config.hpp"
#include "cavhhg/errors.hpp"
#include "cavhhg/kernels.hpp"
#include "cavhhg/pipeline.hpp"
#include "cavhhg/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace cavhhg;
    CLI::App app{"Cavity-controlled high-harmonic generation from non-Hermitian Floquet states"};
    app.set_version_flag("--version", std::string(tool_version));

    std::string command, panel, config_path, out_dir, seed_figure;
    int threads = 0;
    bool no_cache = false, figure_shifts = false;
    app.add_option("command", command, "eigen | spectrum | cavity | chain | sweep | pulse | oracle | reproduce")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("panel", panel, "figure panel for reproduce")->check(CLI::IsMember(panel_names()));
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--threads", threads, "worker threads, 0 keeps the OpenMP default")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--no-cache", no_cache, "always solve, never read or write the eigenstate cache");
    app.add_option("--seed-figure", seed_figure, "start from the parameters of a figure panel")
        ->check(CLI::IsMember(panel_names()));
    app.add_flag("--figure-shifts", figure_shifts,
                 "reproduce: impose the side-harmonic shifts quoted for each panel");
    CLI11_PARSE(app, argc, argv);

    if (threads > 0) kernels::set_threads(threads);

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        if (!seed_figure.empty()) config = panel_config(config, seed_figure, figure_shifts);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 2;
    }

    CommandOptions options;
    options.out_dir = out_dir.empty() ? config.output_dir : out_dir;
    options.use_cache = !no_cache;
    options.panel = panel;
    options.figure_shifts = figure_shifts;
    return run_command(command, config, options);
}
