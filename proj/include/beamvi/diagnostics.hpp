#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "beamvi/banded.hpp"
#include "beamvi/box_solvers.hpp"
#include "beamvi/trajectory.hpp"

namespace beamvi {

/// E^n = |v|_M^2 + (1-2b) a(u^n, u^{n+1}) + b a(u^{n+1}, u^{n+1}) + b a(u^n, u^n)
/// with v = (u^{n+1} - u^n) / dt and a(u, w) = u^T S w.
///
/// Conserved exactly by the unconstrained scheme when f = 0; the constrained
/// scheme can only lose it.
double discrete_energy(const Vector& u_n, const Vector& u_next, const BandedMatrix& M, const BandedMatrix& S,
                       double beta, double dt);

struct ContactRecord {
    long step = 0;
    double tip = 0.0;
    /// (F^n - A u^{n+1})_c
    double reaction = 0.0;
    ContactSide side = ContactSide::Inactive;
};

/// Certifies r = F - A u against the normal cone of the box and reports the
/// entry at DOF c. Free coordinates need |r_i| <= tol; a coordinate at its
/// upper bound needs r_i >= -tol, at its lower bound r_i <= tol.
/// Throws DiagnosticFailure when any condition fails.
ContactRecord contact_residual(const Vector& u_next, const Vector& F, const BandedMatrix& A, const BoxConstraint& box,
                               Eigen::Index c, long step = 0, double tol = 1e-9);

/// Largest max(|u_tip| - g, 0) over the recorded samples and the per-step statistics.
double violation(const Trajectory& traj, double g);

struct LabeledRun {
    std::string label;
    const Trajectory* trajectory = nullptr;
    double wall_seconds = 0.0;
};

struct RunSummary {
    std::string label;
    double max_violation = 0.0;
    double min_tip = 0.0;
    double max_tip = 0.0;
    long contact_episodes = 0;
    double max_reaction_physical = 0.0;
    double wall_seconds = 0.0;
};

std::vector<RunSummary> compare_runs(const std::vector<LabeledRun>& runs);

void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& rows);
void write_summary_text(std::ostream& out, const std::vector<RunSummary>& rows);

}  // namespace beamvi
