#include "beamvi/fem_beam.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace beamvi {
namespace {

// 4-point Gauss-Legendre on [-1, 1]: exact through degree 7, i.e. a cubic
// shape function times a quartic density.
constexpr std::array<double, 4> kGaussX = {-0.86113631159405257522, -0.33998104358485626480,
                                           0.33998104358485626480, 0.86113631159405257522};
constexpr std::array<double, 4> kGaussW = {0.34785484513745385737, 0.65214515486254614263,
                                           0.65214515486254614263, 0.34785484513745385737};

// 2-point rule for the time averages.
constexpr double kGauss2 = 0.57735026918962576451;

}  // namespace

SupportMotion SupportMotion::none() {
    auto zero = [](double) { return 0.0; };
    return {zero, zero, zero};
}

SupportMotion SupportMotion::sine(double amplitude, double omega) {
    return {[=](double t) { return amplitude * std::sin(omega * t); },
            [=](double t) { return amplitude * omega * std::cos(omega * t); },
            [=](double t) { return -amplitude * omega * omega * std::sin(omega * t); }};
}

SupportMotion SupportMotion::cosine(double amplitude, double omega) {
    return {[=](double t) { return amplitude * std::cos(omega * t); },
            [=](double t) { return -amplitude * omega * std::sin(omega * t); },
            [=](double t) { return -amplitude * omega * omega * std::cos(omega * t); }};
}

void BeamModel::validate() const {
    if (!(k2 > 0.0)) throw std::invalid_argument("BeamModel: k2 must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("BeamModel: L must be positive");
    if (!(g > 0.0)) throw std::invalid_argument("BeamModel: g must be positive");
    if (!phi.value || !phi.velocity || !phi.acceleration) {
        throw std::invalid_argument("BeamModel: support motion incomplete");
    }
    if (stops && (!stops->lower || !stops->upper)) {
        throw std::invalid_argument("BeamModel: distributed stops incomplete");
    }
}

Mesh::Mesh(int elements, double length) : J(elements), L(length), h(length / elements) {
    if (elements < 1) throw std::invalid_argument("Mesh: need at least one element");
    if (!(length > 0.0)) throw std::invalid_argument("Mesh: length must be positive");
}

GlobalMatrices assemble(const Mesh& mesh, const BeamModel& model) {
    return assemble<double>(mesh.J, mesh.h, model.k2);
}

Lifting lifting(double x, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("lifting: L must be positive");
    if (x < 0.0 || x > L) throw std::invalid_argument("lifting: x outside [0, L]");
    const double s = x / L;
    const double s2 = s * s;
    return {1.0 - 2.0 * s2 + (4.0 / 3.0) * s2 * s - (1.0 / 3.0) * s2 * s2,
            (-4.0 * s + 4.0 * s2 - (4.0 / 3.0) * s2 * s) / L,
            -8.0 / (L * L * L * L)};
}

double forcing(const BeamModel& model, double x, double t) {
    const Lifting lift = lifting(x, model.L);
    const double external = model.f_tilde ? model.f_tilde(x, t) : 0.0;
    return external - lift.value * model.phi.acceleration(t) -
           model.k2 * lift.fourth_derivative * model.phi.value(t);
}

Eigen::Matrix<double, 2, 4> hermite_shape(double xi, double h) {
    const double xi2 = xi * xi;
    const double xi3 = xi2 * xi;
    Eigen::Matrix<double, 2, 4> n;
    n << 1.0 - 3.0 * xi2 + 2.0 * xi3, h * (xi - 2.0 * xi2 + xi3), 3.0 * xi2 - 2.0 * xi3, h * (xi3 - xi2),
        (-6.0 * xi + 6.0 * xi2) / h, 1.0 - 4.0 * xi + 3.0 * xi2, (6.0 * xi - 6.0 * xi2) / h, 3.0 * xi2 - 2.0 * xi;
    return n;
}

Vector assemble_load(const Mesh& mesh, const std::function<double(double)>& density) {
    Vector load = Vector::Zero(mesh.dofs());
    for (int e = 0; e < mesh.J; ++e) {
        const double x0 = mesh.node(e);
        const double x1 = mesh.node(e + 1);
        const double half = 0.5 * (x1 - x0);
        for (std::size_t q = 0; q < kGaussX.size(); ++q) {
            const double xi = 0.5 * (kGaussX[q] + 1.0);
            const double weight = kGaussW[q] * half * density(x0 + xi * (x1 - x0));
            const auto shape = hermite_shape(xi, mesh.h);
            for (int k = 0; k < 4; ++k) {
                const Eigen::Index dof = DofMap::element_dof(e, k);
                if (dof >= 0) load(dof) += weight * shape(0, k);
            }
        }
    }
    return load;
}

Vector assemble_load(const Mesh& mesh, const BeamModel& model, double t) {
    return assemble_load(mesh, [&](double x) { return forcing(model, x, t); });
}

Vector time_averaged_load(const Mesh& mesh, const BeamModel& model, long n, double dt, double T) {
    if (n < 0) throw std::invalid_argument("time_averaged_load: negative step index");
    if (!(dt > 0.0)) throw std::invalid_argument("time_averaged_load: dt must be positive");
    const double a = static_cast<double>(n) * dt;
    const double b = std::min(static_cast<double>(n + 1) * dt, T);
    if (!(b > a)) return Vector::Zero(mesh.dofs());
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Vector load = assemble_load(mesh, model, mid - half * kGauss2);
    load += assemble_load(mesh, model, mid + half * kGauss2);
    return load * (half / dt);
}

PointValue evaluate(const Vector& dofs, const Mesh& mesh, double x) {
    if (dofs.size() != mesh.dofs()) throw std::invalid_argument("evaluate: wrong number of DOFs");
    if (x < 0.0 || x > mesh.L) throw std::invalid_argument("evaluate: x outside [0, L]");
    const int e = std::min(mesh.J - 1, static_cast<int>(x / mesh.h));
    const double x0 = mesh.node(e);
    const double xi = std::clamp((x - x0) / (mesh.node(e + 1) - x0), 0.0, 1.0);
    // Exact nodal values, free of shape-function rounding.
    if (xi == 1.0) return {dofs(DofMap::displacement(e + 1)), dofs(DofMap::slope(e + 1))};
    if (xi == 0.0) {
        if (e == 0) return {0.0, 0.0};
        return {dofs(DofMap::displacement(e)), dofs(DofMap::slope(e))};
    }
    const auto shape = hermite_shape(xi, mesh.h);
    PointValue out{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
        const Eigen::Index dof = DofMap::element_dof(e, k);
        if (dof < 0) continue;
        out.displacement += shape(0, k) * dofs(dof);
        out.slope += shape(1, k) * dofs(dof);
    }
    return out;
}

Vector interpolate(const Mesh& mesh, const std::function<double(double)>& value,
                   const std::function<double(double)>& slope) {
    Vector dofs(mesh.dofs());
    for (int i = 1; i <= mesh.J; ++i) {
        dofs(DofMap::displacement(i)) = value(mesh.node(i));
        dofs(DofMap::slope(i)) = slope(mesh.node(i));
    }
    return dofs;
}

BoxConstraint box_constraint(const Mesh& mesh, const BeamModel& model) {
    const Eigen::Index n = mesh.dofs();
    BoxConstraint box = BoxConstraint::unbounded(n);
    if (model.stops) {
        for (int i = 1; i <= mesh.J; ++i) {
            box.lower(DofMap::displacement(i)) = model.stops->lower(mesh.node(i));
            box.upper(DofMap::displacement(i)) = model.stops->upper(mesh.node(i));
        }
    } else {
        const Eigen::Index tip = DofMap{mesh.J}.tip();
        box.lower(tip) = -model.g;
        box.upper(tip) = model.g;
    }
    box.validate();
    return box;
}

}  // namespace beamvi
