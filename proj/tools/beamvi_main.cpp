// Command-line front end: run, sweep and stability on a flat key = value config.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamvi/cli.hpp"
#include "beamvi/config.hpp"

namespace {

beamvi::RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return beamvi::parse_config(text.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beam between rigid stops: Signorini, penalty and linear Newmark schemes"};
    app.require_subcommand(1);

    std::string config_path;
    beamvi::cli::Options options;
    std::string output_dir = ".";
    std::string sweep_key;
    std::vector<std::string> sweep_values;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
        sub->add_flag("--force", options.force, "Run even when the stability check fails");
        sub->add_option("--output-dir", output_dir, "Directory for output files");
    };

    CLI::App* run = app.add_subcommand("run", "Run one simulation and write its trajectory CSV");
    add_common(run);
    CLI::App* sweep = app.add_subcommand("sweep", "Run one simulation per value of a parameter");
    add_common(sweep);
    sweep->add_option("--key", sweep_key, "Parameter to vary: dt, beta, inv_eps or J")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")->required()->delimiter(',');
    CLI::App* stability = app.add_subcommand("stability", "Print the time-step stability report");
    add_common(stability);

    CLI11_PARSE(app, argc, argv);
    options.output_dir = output_dir;

    beamvi::RunConfig config;
    try {
        config = load(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return beamvi::cli::kSolverError;
    }

    if (run->parsed()) return beamvi::cli::cmd_run(config, options, std::cout, std::cerr);
    if (sweep->parsed()) return beamvi::cli::cmd_sweep(config, sweep_key, sweep_values, options, std::cout, std::cerr);
    return beamvi::cli::cmd_stability(config, std::cout);
}
