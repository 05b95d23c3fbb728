#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "beamvi/banded.hpp"
#include "beamvi/box_solvers.hpp"

namespace beamvi {

/// Support motion phi(t) together with its first two derivatives.
struct SupportMotion {
    std::function<double(double)> value;
    std::function<double(double)> velocity;
    std::function<double(double)> acceleration;

    static SupportMotion none();
    /// amplitude * sin(omega t)
    static SupportMotion sine(double amplitude, double omega);
    /// amplitude * cos(omega t)
    static SupportMotion cosine(double amplitude, double omega);
};

/// Force density f~(x, t).
using ForceDensity = std::function<double(double, double)>;

/// Obstacle functions g1(x) <= w(x) <= g2(x), imposed at the nodes.
struct DistributedStops {
    std::function<double(double)> lower;
    std::function<double(double)> upper;
};

/// The continuous problem: u_tt + k2 u_xxxx = f on (0, L), clamped at x = 0 to
/// a moving support, free end between the stops.
struct BeamModel {
    double k2 = 1.0;
    double L = 1.0;
    /// Tip stops at -g and +g; infinity removes them.
    double g = kInf;
    /// Replaces the tip stops when set.
    std::optional<DistributedStops> stops;
    SupportMotion phi = SupportMotion::none();
    /// External force density; empty means zero.
    ForceDensity f_tilde;

    void validate() const;
};

struct Mesh {
    int J = 1;
    double L = 1.0;
    double h = 1.0;

    Mesh() = default;
    Mesh(int elements, double length);

    double node(int i) const { return i == J ? L : i * h; }
    Eigen::Index dofs() const { return 2 * static_cast<Eigen::Index>(J); }
};

/// Global numbering with the node-0 DOFs eliminated (0-based): node i >= 1
/// carries its displacement at 2(i-1) and its slope at 2(i-1)+1.
struct DofMap {
    int J = 1;

    static Eigen::Index displacement(int node) { return 2 * static_cast<Eigen::Index>(node - 1); }
    static Eigen::Index slope(int node) { return 2 * static_cast<Eigen::Index>(node - 1) + 1; }
    Eigen::Index tip() const { return displacement(J); }
    Eigen::Index size() const { return 2 * static_cast<Eigen::Index>(J); }
    /// Global index of local DOF k (0..3) of element e, or -1 when clamped.
    static Eigen::Index element_dof(int e, int k) {
        const int node = e + k / 2;
        if (node == 0) return -1;
        return k % 2 == 0 ? displacement(node) : slope(node);
    }
};

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

template <typename Scalar>
Matrix4<Scalar> elemental_mass(const Scalar& h) {
    if (!(h > Scalar(0))) throw std::invalid_argument("elemental_mass: element length must be positive");
    const Scalar h2 = h * h;
    Matrix4<Scalar> m;
    m << Scalar(156), Scalar(22) * h, Scalar(54), Scalar(-13) * h,
         Scalar(22) * h, Scalar(4) * h2, Scalar(13) * h, Scalar(-3) * h2,
         Scalar(54), Scalar(13) * h, Scalar(156), Scalar(-22) * h,
         Scalar(-13) * h, Scalar(-3) * h2, Scalar(-22) * h, Scalar(4) * h2;
    return m * (h / Scalar(420));
}

template <typename Scalar>
Matrix4<Scalar> elemental_stiffness(const Scalar& h, const Scalar& k2) {
    if (!(h > Scalar(0))) throw std::invalid_argument("elemental_stiffness: element length must be positive");
    if (!(k2 > Scalar(0))) throw std::invalid_argument("elemental_stiffness: k2 must be positive");
    const Scalar h2 = h * h;
    Matrix4<Scalar> s;
    s << Scalar(6), Scalar(3) * h, Scalar(-6), Scalar(3) * h,
         Scalar(3) * h, Scalar(2) * h2, Scalar(-3) * h, h2,
         Scalar(-6), Scalar(-3) * h, Scalar(6), Scalar(-3) * h,
         Scalar(3) * h, h2, Scalar(-3) * h, Scalar(2) * h2;
    return s * (Scalar(2) * k2 / (h2 * h));
}

template <typename Scalar>
struct GlobalMatricesT {
    BandedSpd<Scalar> M;
    BandedSpd<Scalar> S;
};

using GlobalMatrices = GlobalMatricesT<double>;

/// Sums the elemental matrices over J elements of length h and drops the
/// clamped node-0 DOFs. Only the lower triangle is accumulated.
template <typename Scalar>
GlobalMatricesT<Scalar> assemble(int J, const Scalar& h, const Scalar& k2) {
    if (J < 1) throw std::invalid_argument("assemble: need at least one element");
    const Eigen::Index n = 2 * static_cast<Eigen::Index>(J);
    GlobalMatricesT<Scalar> out{BandedSpd<Scalar>(n, 3), BandedSpd<Scalar>(n, 3)};
    const Matrix4<Scalar> me = elemental_mass(h);
    const Matrix4<Scalar> se = elemental_stiffness(h, k2);
    for (int e = 0; e < J; ++e) {
        for (int a = 0; a < 4; ++a) {
            const Eigen::Index ga = DofMap::element_dof(e, a);
            if (ga < 0) continue;
            for (int b = 0; b <= a; ++b) {
                const Eigen::Index gb = DofMap::element_dof(e, b);
                if (gb < 0) continue;
                out.M.add(ga, gb, me(a, b));
                out.S.add(ga, gb, se(a, b));
            }
        }
    }
    return out;
}

GlobalMatrices assemble(const Mesh& mesh, const BeamModel& model);

struct Lifting {
    double value;
    double slope;
    double fourth_derivative;
};

/// h(x) = 1 - 2(x/L)^2 + 4/3 (x/L)^3 - 1/3 (x/L)^4, with h(0) = 1, h'(0) = 0,
/// h(L) = 0 and h''(L) = h'''(L) = 0.
Lifting lifting(double x, double L);

/// f = f~ - h(x) phi''(t) - k2 h''''(x) phi(t)
double forcing(const BeamModel& model, double x, double t);

/// Hermite cubic shape functions on an element of length h at local
/// coordinate xi in [0, 1]; row 0 holds values, row 1 x-derivatives.
Eigen::Matrix<double, 2, 4> hermite_shape(double xi, double h);

/// (f(., t), phi_i) for every retained DOF, by 4-point Gauss-Legendre per element.
Vector assemble_load(const Mesh& mesh, const BeamModel& model, double t);

/// Load vector of an arbitrary density q(x).
Vector assemble_load(const Mesh& mesh, const std::function<double(double)>& density);

/// (1/dt) * integral of assemble_load over [n dt, min((n+1) dt, T)], 2-point Gauss in time.
Vector time_averaged_load(const Mesh& mesh, const BeamModel& model, long n, double dt, double T);

struct PointValue {
    double displacement;
    double slope;
};

PointValue evaluate(const Vector& dofs, const Mesh& mesh, double x);

/// Nodal Hermite interpolant of a function given with its derivative.
Vector interpolate(const Mesh& mesh, const std::function<double(double)>& value,
                   const std::function<double(double)>& slope);

/// Bounds for the discrete convex set: the tip DOF in [-g, g], or the
/// distributed stops evaluated at every node's displacement DOF.
BoxConstraint box_constraint(const Mesh& mesh, const BeamModel& model);

}  // namespace beamvi
