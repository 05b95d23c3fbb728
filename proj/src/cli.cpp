#include "beamvi/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "beamvi/diagnostics.hpp"
#include "beamvi/stability.hpp"
#include "beamvi/steppers.hpp"

namespace beamvi::cli {
namespace {

struct Outcome {
    int code = kSuccess;
    std::string log;
    Trajectory trajectory;
    double wall_seconds = 0.0;
};

// Stability check, run and CSV for one configuration; all text goes to the log.
Outcome execute(const RunConfig& config, const Options& options, const std::filesystem::path& csv_path) {
    Outcome result;
    std::ostringstream log;
    try {
        const BeamModel model = make_model(config);
        const Mesh mesh = make_mesh(config);
        const SchemeParams params = make_params(config);
        const StabilityReport report = check(mesh, model, params, config.alpha);
        print(log, report);
        if (report.verdict == Verdict::Violated && !options.force) {
            log << "refusing to run: dt exceeds the stability limit (use --force to override)\n";
            result.code = kStabilityVeto;
            result.log = log.str();
            return result;
        }
        const auto start = std::chrono::steady_clock::now();
        result.trajectory = run(model, mesh, params, make_options(config));
        result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        std::filesystem::create_directories(csv_path.parent_path().empty() ? "." : csv_path.parent_path());
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
        result.trajectory.write_csv(csv);
        log << "wrote " << result.trajectory.records.size() << " rows to " << csv_path.string() << '\n';
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        result.code = kSolverError;
    }
    result.log = log.str();
    return result;
}

std::filesystem::path resolve(const Options& options, const std::string& name) {
    const std::filesystem::path p(name);
    return p.is_absolute() ? p : options.output_dir / p;
}

}  // namespace

std::string sweep_file_name(const std::string& output, const std::string& key, const std::string& value) {
    const std::filesystem::path p(output);
    const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
    return p.stem().string() + "_" + key + "_" + value + ext;
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("BEAM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_run(const RunConfig& config, const Options& options, std::ostream& out, std::ostream& err) {
    const Outcome o = execute(config, options, resolve(options, config.output));
    (o.code == kSuccess ? out : err) << o.log;
    if (o.code == kSuccess) {
        const auto rows = compare_runs({{config.scheme, &o.trajectory, o.wall_seconds}});
        write_summary_text(out, rows);
    }
    return o.code;
}

int cmd_sweep(const RunConfig& config, const std::string& key, const std::vector<std::string>& values,
              const Options& options, std::ostream& out, std::ostream& err) {
    if (key != "dt" && key != "beta" && key != "inv_eps" && key != "J") {
        err << "error: sweep key must be one of dt, beta, inv_eps, J\n";
        return kSolverError;
    }
    if (values.empty()) {
        err << "error: empty value list\n";
        return kSolverError;
    }

    std::vector<RunConfig> children;
    for (const auto& v : values) {
        RunConfig child = config;
        try {
            set_config_value(child, key, v);
            child.validate();
        } catch (const std::exception& e) {
            err << "error: " << key << " = " << v << ": " << e.what() << '\n';
            return kSolverError;
        }
        children.push_back(std::move(child));
    }

    std::vector<Outcome> outcomes(children.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < children.size(); i = next++) {
            outcomes[i] = execute(children[i], options, resolve(options, sweep_file_name(config.output, key, values[i])));
        }
    };
    const unsigned threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(children.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    int code = kSuccess;
    std::vector<LabeledRun> runs;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        (o.code == kSuccess ? out : err) << "[" << key << " = " << values[i] << "]\n" << o.log;
        if (o.code == kSuccess) {
            runs.push_back({key + "=" + values[i], &o.trajectory, o.wall_seconds});
        } else if (o.code == kSolverError) {
            code = kSolverError;
        } else if (code == kSuccess) {
            code = o.code;
        }
    }

    const auto rows = compare_runs(runs);
    std::filesystem::create_directories(options.output_dir);
    std::ofstream csv(options.output_dir / "summary.csv");
    write_summary_csv(csv, rows);
    std::ofstream txt(options.output_dir / "summary.txt");
    write_summary_text(txt, rows);
    write_summary_text(out, rows);
    return code;
}

int cmd_stability(const RunConfig& config, std::ostream& out) {
    const StabilityReport report = check(make_mesh(config), make_model(config), make_params(config), config.alpha);
    print(out, report);
    return kSuccess;
}

}  // namespace beamvi::cli
