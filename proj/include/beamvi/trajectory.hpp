#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

namespace beamvi {

struct TrajectoryRecord {
    double t = 0.0;
    double u_tip = 0.0;
    /// Backward difference (u^n - u^{n-1}) / dt at the tip.
    double v_tip = 0.0;
    /// Discrete energy of the window (u^{n-1}, u^n).
    double energy = 0.0;
    /// Inclusion residual at the tip, in the scheme's dt^2-scaled units.
    double reaction = 0.0;
    /// reaction / dt^2
    double reaction_physical = 0.0;
    double violation = 0.0;
    bool active = false;
};

/// Running statistics over every step, independent of the record stride.
struct StepStats {
    long steps = 0;
    double max_violation = 0.0;
    double min_tip = std::numeric_limits<double>::infinity();
    double max_tip = -std::numeric_limits<double>::infinity();
    /// Maximal runs of consecutive steps in contact.
    long contact_episodes = 0;
    long contact_steps = 0;
    double max_abs_reaction_physical = 0.0;
};

struct Trajectory {
    double dt = 0.0;
    long record_stride = 1;
    std::vector<TrajectoryRecord> records;
    StepStats stats;

    /// Header `t,u_tip,v_tip,energy,reaction,violation`, 17 significant digits.
    void write_csv(std::ostream& out) const;
};

}  // namespace beamvi
