#include "beamvi/box_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace beamvi {

BoxConstraint BoxConstraint::unbounded(Eigen::Index n) {
    return {Vector::Constant(n, -kInf), Vector::Constant(n, kInf)};
}

BoxConstraint BoxConstraint::single(Eigen::Index n, Eigen::Index c, double g) {
    if (c < 0 || c >= n) throw std::invalid_argument("BoxConstraint::single: index out of range");
    BoxConstraint box = unbounded(n);
    box.lower(c) = -g;
    box.upper(c) = g;
    return box;
}

void BoxConstraint::validate() const {
    if (lower.size() != upper.size()) throw std::invalid_argument("BoxConstraint: size mismatch");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) > upper(i)) {
            throw std::invalid_argument("BoxConstraint: lower > upper at DOF " + std::to_string(i));
        }
        if ((std::isfinite(lower(i)) && !(lower(i) < 0.0)) || (std::isfinite(upper(i)) && !(upper(i) > 0.0))) {
            throw std::invalid_argument("BoxConstraint: bounds must straddle zero at DOF " + std::to_string(i));
        }
    }
}

Vector BoxConstraint::project(const Vector& u) const { return u.cwiseMax(lower).cwiseMin(upper); }

bool BoxConstraint::contains(const Vector& u, double slack) const {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u(i) < lower(i) - slack || u(i) > upper(i) + slack) return false;
    }
    return true;
}

Vector solve_single_box(const BandedMatrix& a, const Vector& f, Eigen::Index c, double g) {
    if (!(g > 0.0)) throw std::invalid_argument("solve_single_box: bound must be positive");
    if (c < 0 || c >= a.size()) throw std::invalid_argument("solve_single_box: index out of range");
    if (f.size() != a.size()) throw std::invalid_argument("solve_single_box: dimension mismatch");

    Vector u = cholesky(a).solve(f);
    if (std::abs(u(c)) <= g) return u;

    const double pinned = std::copysign(g, u(c));
    const Eigen::Index n = a.size();
    if (n == 1) {
        u(0) = pinned;
        return u;
    }
    Vector reduced_rhs(n - 1);
    for (Eigen::Index i = 0, k = 0; i < n; ++i) {
        if (i == c) continue;
        reduced_rhs(k++) = f(i) - a(i, c) * pinned;
    }
    const Vector reduced = cholesky(a.without(c)).solve(reduced_rhs);
    for (Eigen::Index i = 0, k = 0; i < n; ++i) u(i) = (i == c) ? pinned : reduced(k++);
    return u;
}

SingleBoxSolver::SingleBoxSolver(const BandedMatrix& a, Eigen::Index c, double g)
    : factor_(a), influence_(), c_(c), g_(g) {
    if (c < 0 || c >= a.size()) throw std::invalid_argument("SingleBoxSolver: index out of range");
    if (!(g > 0.0)) throw std::invalid_argument("SingleBoxSolver: bound must be positive");
    influence_ = factor_.solve(Vector::Unit(a.size(), c));
}

SingleBoxSolver::Result SingleBoxSolver::solve(const Vector& f) const {
    Result r{factor_.solve(f), ContactSide::Inactive};
    const double free_value = r.u(c_);
    if (std::abs(free_value) <= g_) return r;
    const double pinned = std::copysign(g_, free_value);
    r.u += ((pinned - free_value) / influence_(c_)) * influence_;
    r.u(c_) = pinned;
    r.side = pinned > 0.0 ? ContactSide::Upper : ContactSide::Lower;
    return r;
}

double natural_residual(const BandedMatrix& a, const Vector& f, const BoxConstraint& box, const Vector& u) {
    const Vector grad = a * u - f;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double trial = std::clamp(u(i) - grad(i) / a(i, i), box.lower(i), box.upper(i));
        worst = std::max(worst, std::abs(u(i) - trial));
    }
    return worst;
}

double quadratic_objective(const BandedMatrix& a, const Vector& f, const Vector& u) {
    return 0.5 * a.bilinear(u, u) - f.dot(u);
}

PgsResult pgs_box_detailed(const BandedMatrix& a, const Vector& f, const BoxConstraint& box,
                           const Vector& start, PgsOptions options) {
    const Eigen::Index n = a.size();
    if (f.size() != n || box.size() != n || start.size() != n) {
        throw std::invalid_argument("pgs_box: dimension mismatch");
    }
    const long max_iter = options.max_iter > 0 ? options.max_iter : 50 * static_cast<long>(n);
    const Eigen::Index b = a.half_bandwidth();

    PgsResult out{box.project(start), 0, 0.0};
    Vector& u = out.u;
    out.residual = natural_residual(a, f, box, u);
    while (out.residual > options.tol) {
        if (out.iterations >= max_iter) throw NonConvergence("pgs_box: iteration limit reached", out.residual);
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = f(i);
            const Eigen::Index lo = std::max<Eigen::Index>(0, i - b);
            const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + b);
            for (Eigen::Index j = lo; j <= hi; ++j) {
                if (j != i) s -= a(i, j) * u(j);
            }
            u(i) = std::clamp(s / a(i, i), box.lower(i), box.upper(i));
        }
        ++out.iterations;
        if (options.on_sweep) options.on_sweep(u);
        out.residual = natural_residual(a, f, box, u);
    }
    return out;
}

Vector pgs_box(const BandedMatrix& a, const Vector& f, const BoxConstraint& box, double tol, long max_iter) {
    PgsOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    return pgs_box_detailed(a, f, box, Vector::Zero(a.size()), options).u;
}

GeneralizedEig max_generalized_eig_detailed(const BandedMatrix& s, const BandedMatrix& m, double tol,
                                            long max_iter, std::uint64_t seed) {
    if (s.size() != m.size()) throw std::invalid_argument("max_generalized_eig: dimension mismatch");
    const Eigen::Index n = s.size();
    const Factor mass = cholesky(m);

    auto iterate = [&](Vector v, long budget, GeneralizedEig& out) {
        double residual = kInf;
        for (long k = 0; k < budget; ++k) {
            v /= std::sqrt(m.bilinear(v, v));
            const Vector sv = s * v;
            const Vector mv = m * v;
            const double lambda = v.dot(sv);
            residual = (sv - lambda * mv).norm();
            ++out.iterations;
            if (residual <= tol * lambda * mv.norm()) {
                out.value = lambda;
                out.vector = v;
                return true;
            }
            v = mass.solve(sv);
        }
        out.vector = v;
        return false;
    };

    GeneralizedEig out;
    if (iterate(Vector::Ones(n), max_iter / 2, out)) return out;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector restart(n);
    for (Eigen::Index i = 0; i < n; ++i) restart(i) = dist(rng);
    if (iterate(restart, max_iter - max_iter / 2, out)) return out;
    throw NonConvergence("max_generalized_eig: power iteration did not converge", tol);
}

double max_generalized_eig(const BandedMatrix& s, const BandedMatrix& m, double tol) {
    return max_generalized_eig_detailed(s, m, tol).value;
}

}  // namespace beamvi
