#include "beamvi/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace beamvi {
namespace {

const std::set<std::string> kKeys = {"L",    "J",    "k2", "g",       "phi",   "phi_amplitude", "phi_omega",     "f_tilde", "scheme",
                                     "beta", "dt",   "T",  "inv_eps", "alpha", "output",        "record_stride", "seed"};
const std::set<std::string> kRequired = {"L", "J", "k2", "g", "phi", "scheme", "beta", "dt", "T"};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || std::isnan(v)) {
        throw ConfigError(line, key, "expected a number, got '" + value + "'");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& value, int line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(line, key, "expected an integer, got '" + value + "'");
    }
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : "'" + key + "': ") + message),
      line_(line),
      key_(std::move(key)) {}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value, int line) {
    if (key == "L") c.L = to_double(key, value, line);
    else if (key == "J") c.J = static_cast<int>(to_integer(key, value, line));
    else if (key == "k2") c.k2 = to_double(key, value, line);
    else if (key == "g") c.g = to_double(key, value, line);
    else if (key == "phi") c.phi = value;
    else if (key == "phi_amplitude") c.phi_amplitude = to_double(key, value, line);
    else if (key == "phi_omega") c.phi_omega = to_double(key, value, line);
    else if (key == "f_tilde") {
        if (value != "zero") to_double(key, value, line);
        c.f_tilde = value;
    } else if (key == "scheme") c.scheme = value;
    else if (key == "beta") c.beta = to_double(key, value, line);
    else if (key == "dt") c.dt = to_double(key, value, line);
    else if (key == "T") c.T = to_double(key, value, line);
    else if (key == "inv_eps") c.inv_eps = to_double(key, value, line);
    else if (key == "alpha") c.alpha = to_double(key, value, line);
    else if (key == "output") c.output = value;
    else if (key == "record_stride") c.record_stride = value == "auto" ? 0 : to_integer(key, value, line);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_integer(key, value, line));
    else throw ConfigError(line, key, "unknown key");
}

void RunConfig::validate() const {
    auto fail = [](const char* key, const std::string& msg) { throw ConfigError(0, key, msg); };
    if (!(L > 0.0) || !std::isfinite(L)) fail("L", "must be positive");
    if (J < 1) fail("J", "must be at least 1");
    if (!(k2 > 0.0) || !std::isfinite(k2)) fail("k2", "must be positive");
    if (!(g > 0.0)) fail("g", "must be positive (inf removes the stops)");
    if (phi != "sin" && phi != "cos" && phi != "zero") fail("phi", "must be sin, cos or zero");
    if (!std::isfinite(phi_amplitude)) fail("phi_amplitude", "must be finite");
    if (!std::isfinite(phi_omega)) fail("phi_omega", "must be finite");
    if (scheme != "signorini" && scheme != "penalty" && scheme != "linear") {
        fail("scheme", "must be signorini, penalty or linear");
    }
    if (!(beta >= 0.0 && beta <= 0.5)) fail("beta", "must lie in [0, 1/2]");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt", "must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) fail("T", "must be non-negative");
    if (scheme == "penalty") {
        if (!inv_eps) fail("inv_eps", "required when scheme = penalty");
        if (!(*inv_eps > 0.0) || !std::isfinite(*inv_eps)) fail("inv_eps", "must be positive");
        if (!std::isfinite(g)) fail("g", "penalty scheme needs finite stops");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
    if (output.empty()) fail("output", "must not be empty");
    if (record_stride < 0) fail("record_stride", "must be positive or auto");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "", "missing key");
        if (!kKeys.count(key)) throw ConfigError(line, key, "unknown key");
        if (!seen.insert(key).second) throw ConfigError(line, key, "duplicate key");
        if (value.empty()) throw ConfigError(line, key, "missing value");
        set_config_value(c, key, value, line);
    }
    for (const auto& key : kRequired) {
        if (!seen.count(key)) throw ConfigError(0, key, "missing required key");
    }
    if (c.phi != "zero") {
        for (const char* key : {"phi_amplitude", "phi_omega"}) {
            if (!seen.count(key)) throw ConfigError(0, key, "required when phi is not zero");
        }
    }
    c.validate();
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "L = " << fmt17(c.L) << '\n'
        << "J = " << c.J << '\n'
        << "k2 = " << fmt17(c.k2) << '\n'
        << "g = " << fmt17(c.g) << '\n'
        << "phi = " << c.phi << '\n'
        << "phi_amplitude = " << fmt17(c.phi_amplitude) << '\n'
        << "phi_omega = " << fmt17(c.phi_omega) << '\n'
        << "f_tilde = " << c.f_tilde << '\n'
        << "scheme = " << c.scheme << '\n'
        << "beta = " << fmt17(c.beta) << '\n'
        << "dt = " << fmt17(c.dt) << '\n'
        << "T = " << fmt17(c.T) << '\n';
    if (c.inv_eps) out << "inv_eps = " << fmt17(*c.inv_eps) << '\n';
    out << "alpha = " << fmt17(c.alpha) << '\n'
        << "output = " << c.output << '\n'
        << "record_stride = " << (c.record_stride == 0 ? std::string("auto") : std::to_string(c.record_stride)) << '\n'
        << "seed = " << c.seed << '\n';
    return out.str();
}

BeamModel make_model(const RunConfig& c) {
    BeamModel m;
    m.k2 = c.k2;
    m.L = c.L;
    m.g = c.g;
    if (c.phi == "sin") m.phi = SupportMotion::sine(c.phi_amplitude, c.phi_omega);
    else if (c.phi == "cos") m.phi = SupportMotion::cosine(c.phi_amplitude, c.phi_omega);
    else m.phi = SupportMotion::none();
    if (c.f_tilde != "zero") {
        const double value = std::strtod(c.f_tilde.c_str(), nullptr);
        if (value != 0.0) m.f_tilde = [value](double, double) { return value; };
    }
    return m;
}

Mesh make_mesh(const RunConfig& c) { return Mesh(c.J, c.L); }

SchemeParams make_params(const RunConfig& c) { return {c.beta, c.dt, c.T}; }

RunOptions make_options(const RunConfig& c) {
    RunOptions o;
    if (c.scheme == "penalty") o.kind = SchemeKind::Penalty;
    else if (c.scheme == "linear") o.kind = SchemeKind::Linear;
    else o.kind = SchemeKind::Signorini;
    o.inv_eps = c.inv_eps.value_or(0.0);
    o.record_stride = c.record_stride;
    return o;
}

}  // namespace beamvi
