#include "beamvi/steppers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "beamvi/errors.hpp"

namespace beamvi {
namespace {

constexpr double kGauss2 = 0.57735026918962576451;

}  // namespace

long SchemeParams::steps() const { return std::llround(T / dt); }

void SchemeParams::validate() const {
    if (!(beta >= 0.0 && beta <= 0.5)) throw std::invalid_argument("beta must lie in [0, 1/2]");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be non-negative");
}

void PenaltyParams::validate() const {
    if (!(inv_eps > 0.0)) throw std::invalid_argument("inv_eps must be positive");
    SchemeParams{beta, dt, T}.validate();
}

InitialData InitialData::zero() {
    auto zero = [](double) { return 0.0; };
    return {zero, zero, zero, zero};
}

InitialData InitialData::at_rest(const BeamModel& model) {
    const double phi0 = model.phi.value(0.0);
    const double dphi0 = model.phi.velocity(0.0);
    const double L = model.L;
    return {[=](double x) { return -phi0 * lifting(x, L).value; },
            [=](double x) { return -phi0 * lifting(x, L).slope; },
            [=](double x) { return -dphi0 * lifting(x, L).value; },
            [=](double x) { return -dphi0 * lifting(x, L).slope; }};
}

SchemeState init_states(const Mesh& mesh, const BoxConstraint& box, const InitialData& initial, double dt) {
    const Vector u0 = interpolate(mesh, initial.u0, initial.u0_slope);
    if (!box.contains(u0)) throw std::invalid_argument("init_states: initial displacement violates the stops");
    const Vector v0 = interpolate(mesh, initial.v0, initial.v0_slope);
    return {u0, box.project(u0 + dt * v0), 1};
}

SchemeState init_states(const BeamModel& model, const Mesh& mesh, const SchemeParams& params) {
    return init_states(mesh, box_constraint(mesh, model), InitialData::at_rest(model), params.dt);
}

BandedMatrix effective_matrix(const BandedMatrix& M, const BandedMatrix& S, const SchemeParams& params) {
    return combine(M, params.dt * params.dt * params.beta, S);
}

Vector rhs(const BandedMatrix& M, const BandedMatrix& S, const SchemeState& state, const Vector& G,
           const SchemeParams& params) {
    const double dt2 = params.dt * params.dt;
    const double beta = params.beta;
    return 2.0 * (M * state.u_curr) - dt2 * (1.0 - 2.0 * beta) * (S * state.u_curr) - (M * state.u_prev) -
           dt2 * beta * (S * state.u_prev) + dt2 * G;
}

SchemeOperators::SchemeOperators(const GlobalMatrices& matrices, const SchemeParams& params)
    : m_(matrices.M),
      s_(matrices.S),
      a_(effective_matrix(matrices.M, matrices.S, params)),
      b_(combine(combine(matrices.M, 1.0, matrices.M), -params.dt * params.dt * (1.0 - 2.0 * params.beta),
                 matrices.S)),
      factor_(a_),
      params_(params) {}

Vector SchemeOperators::rhs(const SchemeState& state, const Vector& G) const {
    return b_ * state.u_curr - a_ * state.u_prev + (params_.dt * params_.dt) * G;
}

ContactSolver::ContactSolver(const SchemeOperators& ops, const BoxConstraint& box, Eigen::Index tip,
                             SolverChoice choice, PgsOptions pgs)
    : ops_(&ops), box_(box), tip_(tip), choice_(choice), pgs_(pgs) {
    box_.validate();
    if (choice_ == SolverChoice::Projection) {
        for (Eigen::Index i = 0; i < box_.size(); ++i) {
            if (i != tip_ && (std::isfinite(box_.lower(i)) || std::isfinite(box_.upper(i)))) {
                throw std::invalid_argument("projection solver handles a single constrained DOF; use PGS");
            }
        }
        if (box_.lower(tip_) != -box_.upper(tip_)) {
            throw std::invalid_argument("projection solver needs symmetric stops");
        }
        single_ = SingleBoxSolver(ops.A(), tip_, box_.upper(tip_));
    }
}

SingleBoxSolver::Result ContactSolver::solve(const Vector& F, const Vector& warm_start) const {
    if (choice_ == SolverChoice::Projection) return single_.solve(F);
    SingleBoxSolver::Result r{pgs_box_detailed(ops_->A(), F, box_, warm_start, pgs_).u, ContactSide::Inactive};
    if (std::isfinite(box_.upper(tip_)) && r.u(tip_) >= box_.upper(tip_)) r.side = ContactSide::Upper;
    if (std::isfinite(box_.lower(tip_)) && r.u(tip_) <= box_.lower(tip_)) r.side = ContactSide::Lower;
    return r;
}

SchemeState shift(const SchemeState& state, Vector u_next) {
    return {state.u_curr, std::move(u_next), state.n + 1};
}

SchemeState signorini_step(const SchemeState& state, const Vector& F, const ContactSolver& solver) {
    return shift(state, solver.solve(F, state.u_curr).u);
}

SchemeState newmark_linear_step(const SchemeState& state, const Vector& F, const Factor& factor) {
    return shift(state, factor.solve(F));
}

double compliance_force(double u_tip, double g, double inv_eps) {
    return inv_eps * (std::max(u_tip - g, 0.0) - std::max(-g - u_tip, 0.0));
}

SchemeState penalty_step(const SchemeState& state, const Vector& F, const Factor& factor, const Vector& influence,
                         Eigen::Index tip, double g, const PenaltyParams& params) {
    const double dt2 = params.dt * params.dt;
    const double beta = params.beta;
    const double k = params.inv_eps;
    const double explicit_part = (1.0 - 2.0 * beta) * compliance_force(state.u_curr(tip), g, k) +
                                 beta * compliance_force(state.u_prev(tip), g, k);
    Vector u = factor.solve(F) - (dt2 * explicit_part) * influence;
    const double free_tip = u(tip);

    // u_tip + s * p(u_tip) / k = free_tip on each linear piece of p.
    const double s = dt2 * beta * k * influence(tip);
    const double candidates[3] = {free_tip, (free_tip + s * g) / (1.0 + s), (free_tip - s * g) / (1.0 + s)};
    const bool consistent[3] = {std::abs(candidates[0]) <= g, candidates[1] > g, candidates[2] < -g};
    int chosen = -1;
    for (int i = 0; i < 3; ++i) {
        if (!consistent[i]) continue;
        if (chosen >= 0) throw std::logic_error("penalty_step: more than one consistent contact state");
        chosen = i;
    }
    if (chosen < 0) throw std::logic_error("penalty_step: no consistent contact state");

    const double tip_value = candidates[chosen];
    u -= (dt2 * beta * compliance_force(tip_value, g, k)) * influence;
    u(tip) = tip_value;
    return shift(state, std::move(u));
}

LoadAssembler::LoadAssembler(const Mesh& mesh, const BeamModel& model, double T)
    : mesh_(mesh),
      model_(&model),
      T_(T),
      lift_moments_(assemble_load(mesh, [&](double x) { return lifting(x, model.L).value; })),
      unit_moments_(assemble_load(mesh, [](double) { return 1.0; })) {}

Vector LoadAssembler::at(double t) const {
    const BeamModel& m = *model_;
    const double L2 = m.L * m.L;
    Vector load = (-m.phi.acceleration(t)) * lift_moments_ + (8.0 * m.k2 / (L2 * L2) * m.phi.value(t)) * unit_moments_;
    if (m.f_tilde) load += assemble_load(mesh_, [&](double x) { return m.f_tilde(x, t); });
    return load;
}

Vector LoadAssembler::averaged(long n, double dt) const {
    const double a = static_cast<double>(n) * dt;
    const double b = std::min(static_cast<double>(n + 1) * dt, T_);
    if (!(b > a)) return Vector::Zero(mesh_.dofs());
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    return (at(mid - half * kGauss2) + at(mid + half * kGauss2)) * (half / dt);
}

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Signorini: return "signorini";
        case SchemeKind::Linear: return "linear";
        case SchemeKind::Penalty: return "penalty";
    }
    return "unknown";
}

long auto_record_stride(long steps) { return std::max(1L, (steps + 19999) / 20000); }

Trajectory run(const BeamModel& model, const Mesh& mesh, const SchemeParams& params, const RunOptions& options) {
    model.validate();
    params.validate();
    if (options.kind == SchemeKind::Penalty && !(options.inv_eps > 0.0)) {
        throw std::invalid_argument("penalty run needs inv_eps > 0");
    }

    const long N = params.steps();
    const double dt = params.dt;
    const Eigen::Index tip = DofMap{mesh.J}.tip();
    const BoxConstraint box =
        options.kind == SchemeKind::Linear ? BoxConstraint::unbounded(mesh.dofs()) : box_constraint(mesh, model);
    const InitialData initial = options.initial ? *options.initial : InitialData::at_rest(model);
    const GlobalMatrices matrices = assemble(mesh, model);
    const SchemeOperators ops(matrices, params);

    // Tip gap for the violation column; infinite when stops are distributed.
    const double g = (options.kind == SchemeKind::Linear || model.stops) ? kInf : model.g;

    Trajectory traj;
    traj.dt = dt;
    traj.record_stride = options.record_stride > 0 ? options.record_stride : auto_record_stride(N);

    bool was_active = false;
    auto account = [&](long n, const Vector& u, double energy, double reaction, bool active, double v_tip) {
        const double viol = std::max(std::abs(u(tip)) - g, 0.0);
        StepStats& st = traj.stats;
        st.max_violation = std::max(st.max_violation, viol);
        st.min_tip = std::min(st.min_tip, u(tip));
        st.max_tip = std::max(st.max_tip, u(tip));
        if (active) {
            ++st.contact_steps;
            if (!was_active) ++st.contact_episodes;
        }
        was_active = active;
        st.max_abs_reaction_physical = std::max(st.max_abs_reaction_physical, std::abs(reaction) / (dt * dt));
        if (n % traj.record_stride == 0) {
            traj.records.push_back(TrajectoryRecord{static_cast<double>(n) * dt, u(tip), v_tip, energy, reaction,
                                                    reaction / (dt * dt), viol, active});
        }
    };

    SchemeState state = init_states(mesh, box, initial, dt);
    const Vector v0 = interpolate(mesh, initial.v0, initial.v0_slope);
    account(0, state.u_prev,
            matrices.M.bilinear(v0, v0) + matrices.S.bilinear(state.u_prev, state.u_prev), 0.0, false, v0(tip));
    if (N >= 1) {
        account(1, state.u_curr,
                discrete_energy(state.u_prev, state.u_curr, matrices.M, matrices.S, params.beta, dt), 0.0, false,
                (state.u_curr(tip) - state.u_prev(tip)) / dt);
    }
    traj.stats.steps = std::min(N, 1L);

    std::optional<ContactSolver> contact;
    if (options.kind == SchemeKind::Signorini) contact.emplace(ops, box, tip, options.solver);
    Vector influence;
    PenaltyParams penalty{options.inv_eps, params.beta, dt, params.T};
    if (options.kind == SchemeKind::Penalty) influence = ops.factor().solve(Vector::Unit(mesh.dofs(), tip));

    const LoadAssembler loads(mesh, model, params.T);
    Vector f_prev = loads.averaged(0, dt);
    Vector f_curr = loads.averaged(1, dt);
    Vector f_next = loads.averaged(2, dt);
    const double beta = params.beta;

    for (long n = 1; n < N; ++n) {
        try {
            const Vector G = beta * f_next + (1.0 - 2.0 * beta) * f_curr + beta * f_prev;
            const Vector F = ops.rhs(state, G);
            SchemeState next;
            ContactSide side = ContactSide::Inactive;
            double reaction = 0.0;
            switch (options.kind) {
                case SchemeKind::Signorini: {
                    auto solved = contact->solve(F, state.u_curr);
                    const ContactRecord rec = contact_residual(solved.u, F, ops.A(), box, tip, n + 1);
                    side = solved.side;
                    reaction = rec.reaction;
                    next = shift(state, std::move(solved.u));
                    break;
                }
                case SchemeKind::Linear:
                    next = newmark_linear_step(state, F, ops.factor());
                    reaction = F(tip) - (ops.A() * next.u_curr)(tip);
                    break;
                case SchemeKind::Penalty:
                    next = penalty_step(state, F, ops.factor(), influence, tip, model.g, penalty);
                    reaction = F(tip) - (ops.A() * next.u_curr)(tip);
                    if (next.u_curr(tip) > model.g) side = ContactSide::Upper;
                    if (next.u_curr(tip) < -model.g) side = ContactSide::Lower;
                    break;
            }
            const double energy = discrete_energy(state.u_curr, next.u_curr, ops.M(), ops.S(), beta, dt);
            if (options.observer) options.observer(StepReport{n + 1, next, F, side, energy});
            account(n + 1, next.u_curr, energy, reaction, side != ContactSide::Inactive,
                    (next.u_curr(tip) - next.u_prev(tip)) / dt);
            ++traj.stats.steps;
            state = std::move(next);
        } catch (const SolverFailure&) {
            throw;
        } catch (const std::exception& e) {
            throw SolverFailure(n + 1, e.what());
        }
        f_prev = std::move(f_curr);
        f_curr = std::move(f_next);
        f_next = loads.averaged(n + 2, dt);
    }
    return traj;
}

}  // namespace beamvi
