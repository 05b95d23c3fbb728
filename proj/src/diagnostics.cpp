#include "beamvi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "beamvi/errors.hpp"

namespace beamvi {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void Trajectory::write_csv(std::ostream& out) const {
    out << "t,u_tip,v_tip,energy,reaction,violation\n";
    for (const auto& r : records) {
        out << fmt17(r.t) << ',' << fmt17(r.u_tip) << ',' << fmt17(r.v_tip) << ',' << fmt17(r.energy) << ','
            << fmt17(r.reaction) << ',' << fmt17(r.violation) << '\n';
    }
}

double discrete_energy(const Vector& u_n, const Vector& u_next, const BandedMatrix& M, const BandedMatrix& S,
                       double beta, double dt) {
    const Vector v = (u_next - u_n) / dt;
    const Vector s_next = S * u_next;
    return M.bilinear(v, v) + (1.0 - 2.0 * beta) * u_n.dot(s_next) + beta * u_next.dot(s_next) +
           beta * S.bilinear(u_n, u_n);
}

ContactRecord contact_residual(const Vector& u_next, const Vector& F, const BandedMatrix& A, const BoxConstraint& box,
                               Eigen::Index c, long step, double tol) {
    const Vector r = F - A * u_next;
    ContactRecord rec{step, u_next(c), r(c), ContactSide::Inactive};
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const bool at_upper = std::isfinite(box.upper(i)) && u_next(i) >= box.upper(i);
        const bool at_lower = std::isfinite(box.lower(i)) && u_next(i) <= box.lower(i);
        bool ok = true;
        if (u_next(i) > box.upper(i) || u_next(i) < box.lower(i)) {
            ok = false;
        } else if (at_upper) {
            ok = r(i) >= -tol;
        } else if (at_lower) {
            ok = r(i) <= tol;
        } else {
            ok = std::abs(r(i)) <= tol;
        }
        if (!ok) {
            std::ostringstream msg;
            msg << "complementarity violated at step " << step << ", DOF " << i << ": u = " << u_next(i)
                << ", residual = " << r(i);
            throw DiagnosticFailure(msg.str());
        }
        if (i == c) rec.side = at_upper ? ContactSide::Upper : (at_lower ? ContactSide::Lower : ContactSide::Inactive);
    }
    return rec;
}

double violation(const Trajectory& traj, double g) {
    double worst = 0.0;
    for (const auto& r : traj.records) worst = std::max(worst, std::abs(r.u_tip) - g);
    if (traj.stats.steps > 0) {
        worst = std::max({worst, traj.stats.max_tip - g, -traj.stats.min_tip - g});
    }
    return std::max(worst, 0.0);
}

std::vector<RunSummary> compare_runs(const std::vector<LabeledRun>& runs) {
    std::vector<RunSummary> rows;
    rows.reserve(runs.size());
    for (const auto& run : runs) {
        const Trajectory& traj = *run.trajectory;
        RunSummary row;
        row.label = run.label;
        row.wall_seconds = run.wall_seconds;
        row.contact_episodes = traj.stats.contact_episodes;
        row.max_reaction_physical = traj.stats.max_abs_reaction_physical;
        row.max_violation = traj.stats.max_violation;
        row.min_tip = traj.stats.min_tip;
        row.max_tip = traj.stats.max_tip;
        for (const auto& r : traj.records) {
            row.max_violation = std::max(row.max_violation, r.violation);
            row.min_tip = std::min(row.min_tip, r.u_tip);
            row.max_tip = std::max(row.max_tip, r.u_tip);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& rows) {
    out << "label,max_violation,min_tip,max_tip,contact_episodes,max_reaction_physical,wall_seconds\n";
    for (const auto& r : rows) {
        out << r.label << ',' << fmt17(r.max_violation) << ',' << fmt17(r.min_tip) << ',' << fmt17(r.max_tip) << ','
            << r.contact_episodes << ',' << fmt17(r.max_reaction_physical) << ',' << fmt17(r.wall_seconds) << '\n';
    }
}

void write_summary_text(std::ostream& out, const std::vector<RunSummary>& rows) {
    const std::vector<std::string> header = {"label",    "max_violation", "min_tip", "max_tip",
                                             "episodes", "max_reaction",  "wall_s"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({r.label, fmt_short(r.max_violation), fmt_short(r.min_tip), fmt_short(r.max_tip),
                         std::to_string(r.contact_episodes), fmt_short(r.max_reaction_physical),
                         fmt_short(r.wall_seconds)});
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
        width[k] = header[k].size();
        for (const auto& row : cells) width[k] = std::max(width[k], row[k].size());
    }
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k == 0) {
                out << row[k] << std::string(width[k] - row[k].size(), ' ');
            } else {
                out << "  " << std::string(width[k] - row[k].size(), ' ') << row[k];
            }
        }
        out << '\n';
    };
    emit(header);
    for (const auto& row : cells) emit(row);
}

}  // namespace beamvi
