#pragma once

#include <cstdint>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "beamvi/banded.hpp"

namespace beamvi {

using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-DOF bounds lower <= u <= upper; infinite entries are unconstrained.
struct BoxConstraint {
    Vector lower;
    Vector upper;

    static BoxConstraint unbounded(Eigen::Index n);
    /// Everything free except DOF c, which lies in [-g, g].
    static BoxConstraint single(Eigen::Index n, Eigen::Index c, double g);

    Eigen::Index size() const { return lower.size(); }
    /// Throws std::invalid_argument unless lower <= upper everywhere and
    /// every finite bound keeps zero strictly inside.
    void validate() const;
    Vector project(const Vector& u) const;
    bool contains(const Vector& u, double slack = 0.0) const;
};

enum class ContactSide { Inactive, Lower, Upper };

/// Solves A u + d psi_{[-g,g]}(u_c) e_c  ∋  f by the projection rule: solve the
/// unconstrained system, and if the constrained coordinate leaves [-g, g] pin
/// it to the nearest bound and re-solve the remaining equations.
///
/// This overload factors A and the reduced matrix on every call.
Vector solve_single_box(const BandedMatrix& a, const Vector& f, Eigen::Index c, double g);

/// Same problem with A factored once. Pinning DOF c is done through the
/// column z = A^{-1} e_c: u = u' + mu z keeps (A u)_i = f_i for i != c.
class SingleBoxSolver {
public:
    struct Result {
        Vector u;
        ContactSide side = ContactSide::Inactive;
    };

    SingleBoxSolver() = default;
    SingleBoxSolver(const BandedMatrix& a, Eigen::Index c, double g);

    Result solve(const Vector& f) const;
    /// Unconstrained solve with the cached factor.
    Vector solve_free(const Vector& f) const { return factor_.solve(f); }

    const Factor& factor() const noexcept { return factor_; }
    const Vector& influence() const noexcept { return influence_; }
    Eigen::Index index() const noexcept { return c_; }
    double gap() const noexcept { return g_; }

private:
    Factor factor_;
    Vector influence_;
    Eigen::Index c_ = 0;
    double g_ = kInf;
};

struct PgsOptions {
    double tol = 1e-10;
    long max_iter = 0;  // 0 means 50 * n
    /// Called with the iterate after every sweep.
    std::function<void(const Vector&)> on_sweep;
};

struct PgsResult {
    Vector u;
    long iterations = 0;
    double residual = 0.0;
};

/// Natural residual ||u - P(u - D^{-1}(A u - f))||_max with D = diag(A).
double natural_residual(const BandedMatrix& a, const Vector& f, const BoxConstraint& box, const Vector& u);

/// Projected Gauss-Seidel for min 1/2 u^T A u - f^T u over the box.
/// Throws NonConvergence when max_iter sweeps are not enough.
PgsResult pgs_box_detailed(const BandedMatrix& a, const Vector& f, const BoxConstraint& box,
                           const Vector& start, PgsOptions options = {});

Vector pgs_box(const BandedMatrix& a, const Vector& f, const BoxConstraint& box, double tol = 1e-10,
               long max_iter = 0);

/// 1/2 u^T A u - f^T u
double quadratic_objective(const BandedMatrix& a, const Vector& f, const Vector& u);

struct GeneralizedEig {
    double value = 0.0;
    Vector vector;
    long iterations = 0;
};

/// Largest eigenpair of S v = lambda M v by power iteration on M^{-1} S,
/// started from the all-ones vector. Converged once
/// ||S v - lambda M v|| <= tol * lambda * ||M v||. If half the budget passes
/// without convergence the iteration restarts once from a seeded random vector.
GeneralizedEig max_generalized_eig_detailed(const BandedMatrix& s, const BandedMatrix& m, double tol = 1e-10,
                                            long max_iter = 200000, std::uint64_t seed = 0);

double max_generalized_eig(const BandedMatrix& s, const BandedMatrix& m, double tol = 1e-10);

}  // namespace beamvi
