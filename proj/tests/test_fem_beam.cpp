#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "beamvi/fem_beam.hpp"
#include "support/oracles.hpp"

using namespace beamvi;
using oracle::Rational;

namespace {

constexpr double kPipeL = 1.501;
constexpr double kPipeK2 = 282.84;

BeamModel pipe_model() {
    BeamModel m;
    m.k2 = kPipeK2;
    m.L = kPipeL;
    m.g = 0.1;
    m.phi = SupportMotion::sine(0.2, 10.0);
    return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Elemental, MassEntriesAreExactRationals) {
    for (const Rational h : {Rational(1), Rational(3, 7)}) {
        const Matrix4<Rational> m = elemental_mass(h);
        const Rational c = h / 420;
        EXPECT_EQ(m(0, 0), 156 * c);
        EXPECT_EQ(m(0, 1), 22 * h * c);
        EXPECT_EQ(m(0, 3), -13 * h * c);
        EXPECT_EQ(m(1, 1), 4 * h * h * c);
        EXPECT_EQ(m(1, 3), -3 * h * h * c);
        EXPECT_EQ(m(2, 3), -22 * h * c);
        EXPECT_EQ(m, m.transpose());
    }
    EXPECT_EQ(elemental_mass(Rational(2))(0, 3), Rational(-26, 210));
    EXPECT_EQ(elemental_mass(Rational(1))(3, 3), Rational(4, 420));
}

TEST(Elemental, StiffnessEntriesAndRigidModes) {
    const Matrix4<Rational> s = elemental_stiffness(Rational(1), Rational(1));
    EXPECT_EQ(s(0, 0), 12);
    EXPECT_EQ(s(1, 1), 4);
    EXPECT_EQ(s(0, 2), -12);

    const Rational h(5, 3);
    const Matrix4<Rational> sh = elemental_stiffness(h, Rational(7, 2));
    Eigen::Matrix<Rational, 4, 1> translation, rotation;
    translation << 1, 0, 1, 0;
    rotation << 0, 1, h, 1;
    const Eigen::Matrix<Rational, 4, 1> zero = Eigen::Matrix<Rational, 4, 1>::Zero();
    EXPECT_EQ(sh * translation, zero);
    EXPECT_EQ(sh * rotation, zero);

    EXPECT_NEAR(rel(elemental_stiffness(0.079, kPipeK2)(0, 0), 2.0 * kPipeK2 * 6.0 / std::pow(0.079, 3)), 0.0,
                1e-15);
}

TEST(Elemental, RejectsNonPositiveArguments) {
    EXPECT_THROW(elemental_mass(0.0), std::invalid_argument);
    EXPECT_THROW(elemental_stiffness(-1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(elemental_stiffness(1.0, 0.0), std::invalid_argument);
}

TEST(Assembly, SingleElementKeepsLowerRightBlock) {
    const Rational h(2, 5), k2(3);
    const auto gm = assemble(1, h, k2);
    const Matrix4<Rational> me = elemental_mass(h), se = elemental_stiffness(h, k2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            EXPECT_EQ(gm.M(i, j), me(i + 2, j + 2));
            EXPECT_EQ(gm.S(i, j), se(i + 2, j + 2));
        }
    EXPECT_EQ(gm.M(0, 1), -22 * h * h / 420);
}

TEST(Assembly, SharedNodeSumsBothElements) {
    const Rational h(1, 3);
    const auto gm = assemble(2, h, Rational(1));
    EXPECT_EQ(gm.M(0, 0), h / 420 * 312);
    EXPECT_EQ(gm.M(1, 1), h / 420 * 8 * h * h);
    EXPECT_EQ(gm.M(0, 1), Rational(0));  // 22h - 22h
}

TEST(Assembly, BandAndSymmetry) {
    for (int J : {3, 7, 19}) {
        const GlobalMatrices gm = assemble(J, kPipeL / J, kPipeK2);
        const Eigen::MatrixXd m = gm.M.to_dense(), s = gm.S.to_dense();
        EXPECT_EQ(m, m.transpose());
        EXPECT_EQ(s, s.transpose());
        EXPECT_EQ(m(0, 2 * J - 1), 0.0);
        for (int i = 0; i < 2 * J; ++i)
            for (int j = 0; j < 2 * J; ++j)
                if (std::abs(i - j) > 3) {
                    EXPECT_EQ(m(i, j), 0.0);
                    EXPECT_EQ(s(i, j), 0.0);
                }
    }
}

TEST(Assembly, MassAndStiffnessPositiveDefinite) {
    for (int J = 1; J <= 40; ++J) {
        const GlobalMatrices gm = assemble(J, kPipeL / J, kPipeK2);
        EXPECT_NO_THROW(cholesky(gm.M)) << "J = " << J;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.S.to_dense());
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << "J = " << J;
    }
}

TEST(Assembly, GalerkinConsistencyOnCubics) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int J : {1, 4, 19}) {
        const double L = kPipeL, k2 = kPipeK2;
        const Mesh mesh(J, L);
        const GlobalMatrices gm = assemble(J, mesh.h, k2);
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const Vector uu = interpolate(
            mesh, [&](double x) { return a * x * x + b * x * x * x; },
            [&](double x) { return 2 * a * x + 3 * b * x * x; });
        const Vector vv = interpolate(
            mesh, [&](double x) { return c * x * x + d * x * x * x; },
            [&](double x) { return 2 * c * x + 3 * d * x * x; });
        const double strain = k2 * (4 * a * c * L + 6 * (a * d + b * c) * L * L + 12 * b * d * L * L * L);
        const double mass = a * c * std::pow(L, 5) / 5 + (a * d + b * c) * std::pow(L, 6) / 6 +
                            b * d * std::pow(L, 7) / 7;
        EXPECT_NEAR(rel(gm.S.bilinear(vv, uu), strain), 0.0, 1e-10);
        EXPECT_NEAR(rel(gm.M.bilinear(vv, uu), mass), 0.0, 1e-10);
    }
}

TEST(Lifting, BoundaryValuesAndDerivatives) {
    EXPECT_EQ(lifting(0.0, 2.0).value, 1.0);
    EXPECT_NEAR(lifting(2.0, 2.0).value, 0.0, 1e-15);
    EXPECT_EQ(lifting(0.0, 2.0).slope, 0.0);
    EXPECT_NEAR(lifting(2.0, 2.0).slope, -4.0 / 6.0, 1e-15);
    EXPECT_EQ(lifting(0.37, 1.0).fourth_derivative, -8.0);
    EXPECT_THROW(lifting(-0.1, 1.0), std::invalid_argument);
    EXPECT_THROW(lifting(1.1, 1.0), std::invalid_argument);

    const double eps = 1e-6, x = 0.7, L = kPipeL;
    const double fd = (lifting(x + eps, L).value - lifting(x - eps, L).value) / (2 * eps);
    EXPECT_NEAR(lifting(x, L).slope, fd, 1e-8);
    // h''(L) = 0
    const double curv = (lifting(L, L).value - 2 * lifting(L - eps * 100, L).value +
                         lifting(L - eps * 200, L).value) / (1e-8);
    EXPECT_NEAR(curv, 0.0, 1e-3);
}

TEST(Forcing, SupportMotionExamples) {
    const BeamModel m = pipe_model();
    EXPECT_NEAR(forcing(m, 0.5, 0.0), 0.0, 1e-12);
    const double t = std::numbers::pi / 20.0;
    for (double x : {0.0, 0.4, kPipeL}) {
        const double expected = 20.0 * lifting(x, kPipeL).value + 0.2 * 8.0 * kPipeK2 / std::pow(kPipeL, 4);
        EXPECT_NEAR(rel(forcing(m, x, t), expected), 0.0, 1e-13);
    }
    BeamModel constant;
    constant.f_tilde = [](double, double) { return 1.0; };
    EXPECT_EQ(forcing(constant, 0.3, 5.0), 1.0);
}

TEST(Load, ZeroAndUnitDensity) {
    const Mesh one(1, 0.8);
    EXPECT_EQ(assemble_load(one, [](double) { return 0.0; }), Vector::Zero(2));
    const Vector unit = assemble_load(one, [](double) { return 1.0; });
    EXPECT_NEAR(unit(0), 0.4, 1e-15);
    EXPECT_NEAR(unit(1), -0.64 / 12.0, 1e-15);
}

TEST(Load, ExactForQuarticDensities) {
    const int J = 5;
    const Mesh mesh(J, kPipeL);
    auto q = [](double x) { return 1.0 - 3.0 * x + 2.0 * x * x * x * x; };
    const Vector load = assemble_load(mesh, q);
    for (int i = 0; i < 2 * J; ++i) {
        const double expected =
            oracle::integrate_on_mesh([&](double x) { return q(x) * oracle::basis(i, J, kPipeL, x); }, J, kPipeL, 1e-14);
        EXPECT_NEAR(load(i), expected, 1e-12 * (1.0 + std::abs(expected)));
    }
}

TEST(Load, SupportMotionMatchesAdaptiveQuadrature) {
    const BeamModel m = pipe_model();
    const int J = 19;
    const Mesh mesh(J, kPipeL);
    for (double t : {0.05, 0.3, 1.7}) {
        const Vector load = assemble_load(mesh, m, t);
        for (int i = 0; i < 2 * J; ++i) {
            const double expected = oracle::integrate_on_mesh(
                [&](double x) { return forcing(m, x, t) * oracle::basis(i, J, kPipeL, x); }, J, kPipeL, 1e-13);
            EXPECT_NEAR(load(i), expected, 1e-10 * std::max(1.0, load.cwiseAbs().maxCoeff()));
        }
    }
}

TEST(TimeAverage, ConstantAndLinearInTime) {
    const Mesh mesh(4, 1.0);
    BeamModel steady;
    steady.f_tilde = [](double x, double) { return 2.0 + x; };
    const Vector a = time_averaged_load(mesh, steady, 3, 0.1, 10.0);
    EXPECT_LE((a - assemble_load(mesh, steady, 0.33)).cwiseAbs().maxCoeff(), 1e-14);

    BeamModel ramp;
    ramp.f_tilde = [](double x, double t) { return t * (1.0 + x * x); };
    const Vector b = time_averaged_load(mesh, ramp, 3, 0.1, 10.0);
    EXPECT_LE((b - assemble_load(mesh, ramp, 0.35)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TimeAverage, SineSupportMatchesAdaptiveQuadrature) {
    const BeamModel m = pipe_model();
    const Mesh mesh(19, kPipeL);
    const double dt = 5e-5;
    for (long n : {0L, 1000L}) {
        const Vector avg = time_averaged_load(mesh, m, n, dt, 2.0);
        for (Eigen::Index i = 0; i < avg.size(); ++i) {
            const double expected = oracle::adaptive_simpson(
                [&](double t) { return assemble_load(mesh, m, t)(i); }, n * dt, (n + 1) * dt, 1e-16) / dt;
            EXPECT_NEAR(avg(i), expected, 1e-10 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST(TimeAverage, WindowClampedAtHorizon) {
    const Mesh mesh(2, 1.0);
    BeamModel steady;
    steady.f_tilde = [](double, double) { return 1.0; };
    const Vector full = assemble_load(mesh, steady, 0.0);
    EXPECT_LE((time_averaged_load(mesh, steady, 9, 0.1, 0.95) - 0.5 * full).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(time_averaged_load(mesh, steady, 10, 0.1, 0.95), Vector::Zero(4));
    EXPECT_THROW(time_averaged_load(mesh, steady, -1, 0.1, 1.0), std::invalid_argument);
}

TEST(Evaluate, NodalValuesAndZero) {
    const Mesh mesh(5, kPipeL);
    EXPECT_EQ(evaluate(Vector::Zero(10), mesh, 0.77).displacement, 0.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector dofs(10);
    for (int i = 0; i < 10; ++i) dofs(i) = u(rng);
    for (int node = 1; node <= 5; ++node) {
        const PointValue p = evaluate(dofs, mesh, mesh.node(node));
        EXPECT_EQ(p.displacement, dofs(DofMap::displacement(node)));
        EXPECT_EQ(p.slope, dofs(DofMap::slope(node)));
    }
    EXPECT_EQ(evaluate(dofs, mesh, kPipeL).displacement, dofs(DofMap{5}.tip()));
    EXPECT_THROW(evaluate(dofs, mesh, kPipeL + 1e-9), std::invalid_argument);
    EXPECT_THROW(evaluate(dofs, mesh, -1e-9), std::invalid_argument);
    EXPECT_THROW(evaluate(Vector::Zero(9), mesh, 0.1), std::invalid_argument);
}

TEST(Evaluate, ReproducesClampedCubics) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int J : {1, 3, 19}) {
        const Mesh mesh(J, kPipeL);
        const double a = u(rng), b = u(rng);
        auto p = [&](double x) { return a * x * x + b * x * x * x; };
        const Vector dofs = interpolate(mesh, p, [&](double x) { return 2 * a * x + 3 * b * x * x; });
        double scale = 0.0;
        for (int k = 0; k <= 100; ++k) scale = std::max(scale, std::abs(p(kPipeL * k / 100.0)));
        for (int k = 0; k < 100; ++k) {
            const double x = kPipeL * (k + 0.5) / 100.0;
            EXPECT_NEAR(evaluate(dofs, mesh, x).displacement, p(x), 1e-12 * scale);
        }
        const Mesh unit(J, 1.0);
        const Vector sq = interpolate(unit, [](double x) { return x * x; }, [](double x) { return 2 * x; });
        EXPECT_NEAR(evaluate(sq, unit, 0.123).displacement, 0.123 * 0.123, 1e-15);
    }
}

TEST(Stops, TipAndDistributedBoxes) {
    const Mesh mesh(4, 1.0);
    BeamModel tip;
    tip.g = 0.1;
    const BoxConstraint b = box_constraint(mesh, tip);
    EXPECT_EQ(b.upper(DofMap{4}.tip()), 0.1);
    EXPECT_EQ(b.lower(DofMap{4}.tip()), -0.1);
    EXPECT_TRUE(std::isinf(b.upper(0)));

    BeamModel dist;
    dist.stops = DistributedStops{[](double x) { return -0.1 - x; }, [](double x) { return 0.05 + x; }};
    const BoxConstraint d = box_constraint(mesh, dist);
    EXPECT_EQ(d.upper(DofMap::displacement(2)), 0.55);
    EXPECT_EQ(d.lower(DofMap::displacement(4)), -1.1);
    EXPECT_TRUE(std::isinf(d.upper(DofMap::slope(2))));
}
