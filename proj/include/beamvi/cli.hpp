#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamvi/config.hpp"

namespace beamvi::cli {

enum ExitCode : int { kSuccess = 0, kSolverError = 1, kStabilityVeto = 2 };

struct Options {
    bool force = false;
    std::filesystem::path output_dir = ".";
};

/// Prints the stability report, runs, writes the trajectory CSV.
int cmd_run(const RunConfig& config, const Options& options, std::ostream& out, std::ostream& err);

/// One run per value of key (dt, beta, inv_eps or J), in parallel; writes
/// one CSV per run plus summary.csv and summary.txt. Worker count comes from
/// BEAM_THREADS, else the hardware concurrency.
int cmd_sweep(const RunConfig& config, const std::string& key, const std::vector<std::string>& values,
              const Options& options, std::ostream& out, std::ostream& err);

int cmd_stability(const RunConfig& config, std::ostream& out);

/// CSV file name for one sweep child: <stem>_<key>_<value><ext>.
std::string sweep_file_name(const std::string& output, const std::string& key, const std::string& value);

unsigned sweep_threads();

}  // namespace beamvi::cli
