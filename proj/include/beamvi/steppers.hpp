#pragma once

#include <functional>
#include <optional>
#include <string>

#include "beamvi/banded.hpp"
#include "beamvi/box_solvers.hpp"
#include "beamvi/diagnostics.hpp"
#include "beamvi/fem_beam.hpp"
#include "beamvi/trajectory.hpp"

namespace beamvi {

/// gamma = 1/2 family with beta in [0, 1/2].
struct SchemeParams {
    double beta = 0.5;
    double dt = 1e-3;
    double T = 1.0;

    /// round(T / dt)
    long steps() const;
    void validate() const;
};

/// The two trailing iterates (u^{n-1}, u^n).
struct SchemeState {
    Vector u_prev;
    Vector u_curr;
    long n = 1;
};

struct PenaltyParams {
    /// Stop stiffness 1/eps, applied directly in the normalized equation.
    double inv_eps = 1e8;
    double beta = 0.25;
    double dt = 1e-6;
    double T = 1.0;

    void validate() const;
};

/// Initial displacement and velocity, each with its x-derivative.
struct InitialData {
    std::function<double(double)> u0;
    std::function<double(double)> u0_slope;
    std::function<double(double)> v0;
    std::function<double(double)> v0_slope;

    static InitialData zero();
    /// Beam at rest in the fixed frame: u0 = -phi(0) h, v0 = -phi'(0) h.
    static InitialData at_rest(const BeamModel& model);
};

/// u^0 = interpolant of u0; u^1 = u^0 + dt * interpolant of v0, projected
/// into the box. Throws std::invalid_argument when u^0 is infeasible.
SchemeState init_states(const Mesh& mesh, const BoxConstraint& box, const InitialData& initial, double dt);
SchemeState init_states(const BeamModel& model, const Mesh& mesh, const SchemeParams& params);

/// A = M + dt^2 beta S
BandedMatrix effective_matrix(const BandedMatrix& M, const BandedMatrix& S, const SchemeParams& params);

/// F^n = (2M - dt^2 (1-2 beta) S) u^n - (M + dt^2 beta S) u^{n-1} + dt^2 G^n
Vector rhs(const BandedMatrix& M, const BandedMatrix& S, const SchemeState& state, const Vector& G,
           const SchemeParams& params);

/// Time-invariant operators of one run: A and its factor, B = 2M - dt^2(1-2b)S.
class SchemeOperators {
public:
    SchemeOperators(const GlobalMatrices& matrices, const SchemeParams& params);

    Vector rhs(const SchemeState& state, const Vector& G) const;

    const BandedMatrix& M() const noexcept { return m_; }
    const BandedMatrix& S() const noexcept { return s_; }
    const BandedMatrix& A() const noexcept { return a_; }
    const Factor& factor() const noexcept { return factor_; }
    const SchemeParams& params() const noexcept { return params_; }

private:
    BandedMatrix m_, s_, a_, b_;
    Factor factor_;
    SchemeParams params_;
};

enum class SolverChoice { Projection, Pgs };

/// Solver for A u + dt^2 d psi_K(u) ∋ F over a box: the projection rule for a
/// single constrained DOF, projected Gauss-Seidel otherwise.
class ContactSolver {
public:
    ContactSolver(const SchemeOperators& ops, const BoxConstraint& box, Eigen::Index tip, SolverChoice choice,
                  PgsOptions pgs = {});

    SingleBoxSolver::Result solve(const Vector& F, const Vector& warm_start) const;

    SolverChoice choice() const noexcept { return choice_; }
    const BoxConstraint& box() const noexcept { return box_; }

private:
    const SchemeOperators* ops_;
    BoxConstraint box_;
    Eigen::Index tip_;
    SolverChoice choice_;
    PgsOptions pgs_;
    SingleBoxSolver single_;
};

SchemeState shift(const SchemeState& state, Vector u_next);

SchemeState signorini_step(const SchemeState& state, const Vector& F, const ContactSolver& solver);
SchemeState newmark_linear_step(const SchemeState& state, const Vector& F, const Factor& factor);

/// Normal-compliance tip force (1/eps)[max(u - g, 0) - max(-g - u, 0)],
/// pushing back toward the gap.
double compliance_force(double u_tip, double g, double inv_eps);

/// Newmark step with the compliance force in the beta-average like the
/// elastic term; the piecewise-linear implicit part is solved exactly by
/// trying each contact state. `influence` is A^{-1} e_tip.
SchemeState penalty_step(const SchemeState& state, const Vector& F, const Factor& factor, const Vector& influence,
                         Eigen::Index tip, double g, const PenaltyParams& params);

/// Spatial inner products of f over a time window, with the lifting part
/// precomputed; agrees with time_averaged_load.
class LoadAssembler {
public:
    LoadAssembler(const Mesh& mesh, const BeamModel& model, double T);
    Vector averaged(long n, double dt) const;
    Vector at(double t) const;

private:
    Mesh mesh_;
    const BeamModel* model_;
    double T_;
    Vector lift_moments_;   // (h, phi_i)
    Vector unit_moments_;   // (1, phi_i)
};

enum class SchemeKind { Signorini, Linear, Penalty };

std::string to_string(SchemeKind kind);

/// Passed to the per-step observer after every step.
struct StepReport {
    long n;  // index of the new iterate
    const SchemeState& state;
    const Vector& F;
    ContactSide side;
    double energy;
};

struct RunOptions {
    SchemeKind kind = SchemeKind::Signorini;
    SolverChoice solver = SolverChoice::Projection;
    double inv_eps = 0.0;
    /// 0 selects ceil(N / 20000).
    long record_stride = 0;
    /// Empty selects InitialData::at_rest.
    std::optional<InitialData> initial;
    std::function<void(const StepReport&)> observer;
};

long auto_record_stride(long steps);

/// Full time loop. Solver failures are rethrown as SolverFailure carrying the step.
Trajectory run(const BeamModel& model, const Mesh& mesh, const SchemeParams& params, const RunOptions& options);

}  // namespace beamvi
