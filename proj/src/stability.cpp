#include "beamvi/stability.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "beamvi/box_solvers.hpp"
#include "beamvi/steppers.hpp"

namespace beamvi {

double kappa_bound(double k2, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("kappa_bound: dx must be positive");
    constexpr double kConstant = 24.0 * 420.0 * 19.0 * 19.0 / 37.0;
    const double dx2 = dx * dx;
    return kConstant * k2 / (dx2 * dx2);
}

double kappa_exact(const GlobalMatrices& matrices, double tol) {
    return max_generalized_eig(matrices.S, matrices.M, tol);
}

double max_stable_dt(double kappa, double beta, double alpha) {
    if (!(beta >= 0.0 && beta <= 0.5)) throw std::invalid_argument("max_stable_dt: beta must lie in [0, 1/2]");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("max_stable_dt: alpha must lie in (0, 1)");
    if (!(kappa > 0.0)) throw std::invalid_argument("max_stable_dt: kappa must be positive");
    if (beta == 0.5) return kInf;
    return std::min(2.0 * std::sqrt((1.0 - alpha) / (kappa * (1.0 - 2.0 * beta))), alpha);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Unconditional: return "unconditional";
        case Verdict::Stable: return "stable";
        case Verdict::Violated: return "violated";
    }
    return "unknown";
}

StabilityReport check(const Mesh& mesh, const BeamModel& model, const SchemeParams& params, double alpha) {
    StabilityReport r;
    r.dt = params.dt;
    r.beta = params.beta;
    r.alpha = alpha;
    r.kappa_bound = kappa_bound(model.k2, mesh.h);
    r.kappa_exact = kappa_exact(assemble(mesh, model));
    r.dt_max_bound = max_stable_dt(r.kappa_bound, params.beta, alpha);
    r.dt_max_exact = max_stable_dt(r.kappa_exact, params.beta, alpha);
    r.within_bound = params.dt < r.dt_max_bound;
    if (params.beta == 0.5) {
        r.verdict = Verdict::Unconditional;
    } else {
        r.verdict = params.dt < r.dt_max_exact ? Verdict::Stable : Verdict::Violated;
    }
    return r;
}

void print(std::ostream& out, const StabilityReport& r) {
    char buf[256];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%-14s %.6e\n", key, v);
        out << buf;
    };
    line("kappa_bound", r.kappa_bound);
    line("kappa_exact", r.kappa_exact);
    line("dt_max_bound", r.dt_max_bound);
    line("dt_max_exact", r.dt_max_exact);
    line("dt", r.dt);
    line("beta", r.beta);
    line("alpha", r.alpha);
    out << "within_bound   " << (r.within_bound ? "yes" : "no") << '\n';
    out << "verdict        " << to_string(r.verdict) << '\n';
}

}  // namespace beamvi
