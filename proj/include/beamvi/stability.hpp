#pragma once

#include <iosfwd>
#include <string>

#include "beamvi/fem_beam.hpp"

namespace beamvi {

struct SchemeParams;

/// Closed-form upper bound on sup a(u,u)/|u|^2 for Hermite cubics on a
/// uniform mesh: (24 * 420 * 19^2 / 37) k2 / dx^4. Deliberately loose.
double kappa_bound(double k2, double dx);

/// Exact discrete Rayleigh-quotient maximum, the largest eigenvalue of S v = k M v.
double kappa_exact(const GlobalMatrices& matrices, double tol = 1e-10);

/// min(2 sqrt((1-alpha) / (kappa (1-2 beta))), alpha); +inf for beta = 1/2.
double max_stable_dt(double kappa, double beta, double alpha);

enum class Verdict { Unconditional, Stable, Violated };

std::string to_string(Verdict v);

struct StabilityReport {
    double kappa_bound = 0.0;
    double kappa_exact = 0.0;
    double dt_max_bound = 0.0;
    double dt_max_exact = 0.0;
    double dt = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    Verdict verdict = Verdict::Unconditional;
    /// dt < dt_max_bound, the certificate that needs no eigenvalue solve.
    bool within_bound = true;
};

/// Verdict is Violated when beta < 1/2 and dt >= dt_max_exact.
StabilityReport check(const Mesh& mesh, const BeamModel& model, const SchemeParams& params, double alpha);

void print(std::ostream& out, const StabilityReport& report);

}  // namespace beamvi
