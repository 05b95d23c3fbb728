#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "beamvi/fem_beam.hpp"
#include "beamvi/steppers.hpp"

namespace beamvi {

/// Malformed line (key empty) or invalid value for a named key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string key, const std::string& message);

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

/// One simulation, as read from a flat `key = value` file.
struct RunConfig {
    double L = 0.0;
    int J = 0;
    double k2 = 0.0;
    double g = 0.0;
    /// sin | cos | zero
    std::string phi = "zero";
    double phi_amplitude = 0.0;
    double phi_omega = 0.0;
    /// zero, or a constant density written as a number
    std::string f_tilde = "zero";
    /// signorini | penalty | linear
    std::string scheme = "signorini";
    double beta = 0.5;
    double dt = 0.0;
    double T = 0.0;
    std::optional<double> inv_eps;
    double alpha = 0.01;
    std::string output = "trajectory.csv";
    /// 0 means auto
    long record_stride = 0;
    std::uint64_t seed = 0;

    /// Cross-field checks; throws ConfigError naming the offending key.
    void validate() const;
};

RunConfig parse_config(const std::string& text);

/// Every effective value, defaults included, in the same format.
std::string serialize_config(const RunConfig& config);

/// Overwrites one key from its textual value, as the parser would.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value, int line = 0);

BeamModel make_model(const RunConfig& config);
Mesh make_mesh(const RunConfig& config);
SchemeParams make_params(const RunConfig& config);
RunOptions make_options(const RunConfig& config);

}  // namespace beamvi
