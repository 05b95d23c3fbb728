#include <gtest/gtest.h>

#include <random>

#include "beamvi/box_solvers.hpp"
#include "beamvi/fem_beam.hpp"
#include "support/oracles.hpp"

using namespace beamvi;

namespace {

BandedMatrix dense_band(const Eigen::MatrixXd& a) { return BandedMatrix::from_dense(a, a.rows() - 1); }

Vector random_vector(int n, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

}  // namespace

TEST(SingleBox, IdentityProjectsThenPassesThrough) {
    const BandedMatrix a = dense_band(Eigen::MatrixXd::Identity(2, 2));
    const Vector u = solve_single_box(a, Vector{{2.0, 0.5}}, 0, 1.0);
    EXPECT_EQ(u, (Vector{{1.0, 0.5}}));
}

TEST(SingleBox, UpperContactWithPositiveMultiplier) {
    Eigen::MatrixXd d(2, 2);
    d << 2, 1, 1, 2;
    const BandedMatrix a = dense_band(d);
    const Vector f{{4.0, 4.0}};
    const Vector u = solve_single_box(a, f, 0, 1.0);
    EXPECT_DOUBLE_EQ(u(0), 1.0);
    EXPECT_NEAR(u(1), 1.5, 1e-15);
    const Vector r = f - a * u;
    EXPECT_NEAR(r(0), 0.5, 1e-15);
    EXPECT_NEAR(r(1), 0.0, 1e-15);

    const auto oracle = oracle::active_set(d, f, Vector{{-1.0, -kInf}}, Vector{{1.0, kInf}});
    ASSERT_TRUE(oracle);
    EXPECT_LE((*oracle - u).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SingleBox, InteriorSolutionIsUnconstrained) {
    Eigen::MatrixXd d(2, 2);
    d << 2, 1, 1, 2;
    const Vector u = solve_single_box(dense_band(d), Vector{{1.0, 1.0}}, 0, 1.0);
    EXPECT_NEAR(u(0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(u(1), 1.0 / 3.0, 1e-15);
}

TEST(SingleBox, RejectsBadArguments) {
    const BandedMatrix a = dense_band(Eigen::MatrixXd::Identity(2, 2));
    EXPECT_THROW(solve_single_box(a, Vector::Zero(2), 0, 0.0), std::invalid_argument);
    EXPECT_THROW(solve_single_box(a, Vector::Zero(2), 2, 1.0), std::invalid_argument);
    EXPECT_THROW(solve_single_box(a, Vector::Zero(3), 0, 1.0), std::invalid_argument);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    EXPECT_THROW(solve_single_box(dense_band(indefinite), Vector::Ones(2), 0, 1.0), NotPositiveDefinite);
}

TEST(SingleBox, KktCertificateAndOracleOnRandomSystems) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = dim(rng);
        const Eigen::MatrixXd d = oracle::random_spd(n, rng);
        const Vector f = random_vector(n, rng, 4.0);
        const int c = std::uniform_int_distribution<int>(0, n - 1)(rng);
        const double g = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        const BandedMatrix a = dense_band(d);

        const Vector u = solve_single_box(a, f, c, g);
        const Vector r = f - a * u;
        for (int i = 0; i < n; ++i)
            if (i != c) EXPECT_LE(std::abs(r(i)), 1e-9);
        if (std::abs(u(c)) < g) {
            EXPECT_LE(std::abs(r(c)), 1e-9);
        } else if (u(c) == g) {
            EXPECT_GE(r(c), -1e-9);
        } else {
            ASSERT_EQ(u(c), -g);
            EXPECT_LE(r(c), 1e-9);
        }

        const BoxConstraint box = BoxConstraint::single(n, c, g);
        const auto expected = oracle::active_set(d, f, box.lower, box.upper);
        ASSERT_TRUE(expected);
        EXPECT_LE((u - *expected).cwiseAbs().maxCoeff(), 1e-10);

        const SingleBoxSolver cached(a, c, g);
        EXPECT_LE((cached.solve(f).u - u).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((pgs_box(a, f, box, 1e-13, 100000) - u).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(SingleBox, CachedSolverReportsSide) {
    const BandedMatrix a = dense_band(Eigen::MatrixXd::Identity(2, 2));
    const SingleBoxSolver s(a, 1, 0.5);
    EXPECT_EQ(s.solve(Vector{{0.0, 2.0}}).side, ContactSide::Upper);
    EXPECT_EQ(s.solve(Vector{{0.0, -2.0}}).side, ContactSide::Lower);
    EXPECT_EQ(s.solve(Vector{{0.0, 0.1}}).side, ContactSide::Inactive);
    EXPECT_EQ(s.solve(Vector{{0.0, -2.0}}).u(1), -0.5);
}

TEST(Pgs, UnboundedAgreesWithCholesky) {
    const GlobalMatrices gm = assemble(8, 0.2, 5.0);
    const BandedMatrix a = combine(gm.M, 1e-4, gm.S);
    std::mt19937_64 rng(3);
    const Vector f = random_vector(static_cast<int>(a.size()), rng, 1.0);
    const Vector u = pgs_box(a, f, BoxConstraint::unbounded(a.size()), 1e-12, 100000);
    EXPECT_LE((u - cholesky(a).solve(f)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pgs, MatchesActiveSetOracleOnFullBoxes) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> width(0.05, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 6;
        const Eigen::MatrixXd d = oracle::random_spd(n, rng);
        const Vector f = random_vector(n, rng, 5.0);
        BoxConstraint box{Vector(n), Vector(n)};
        for (int i = 0; i < n; ++i) {
            box.lower(i) = -width(rng);
            box.upper(i) = width(rng);
        }
        const auto expected = oracle::active_set(d, f, box.lower, box.upper);
        ASSERT_TRUE(expected);
        const Vector u = pgs_box(dense_band(d), f, box, 1e-12, 100000);
        EXPECT_LE((u - *expected).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_TRUE(box.contains(u));
    }
}

TEST(Pgs, ObjectiveNeverIncreasesAcrossSweeps) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::MatrixXd d = oracle::random_spd(6, rng);
        const BandedMatrix a = dense_band(d);
        const Vector f = random_vector(6, rng, 5.0);
        const BoxConstraint box{Vector::Constant(6, -0.3), Vector::Constant(6, 0.4)};
        double last = quadratic_objective(a, f, Vector::Zero(6));
        PgsOptions opts;
        opts.tol = 1e-13;
        opts.max_iter = 100000;
        opts.on_sweep = [&](const Vector& u) {
            const double q = quadratic_objective(a, f, u);
            EXPECT_LE(q, last + 1e-14 * (1.0 + std::abs(last)));
            last = q;
        };
        pgs_box_detailed(a, f, box, Vector::Zero(6), opts);
    }
}

TEST(Pgs, IterationLimitCarriesResidual) {
    const GlobalMatrices gm = assemble(10, 0.1, 1.0);
    const BandedMatrix a = combine(gm.M, 1.0, gm.S);
    try {
        pgs_box(a, Vector::Ones(a.size()), BoxConstraint::unbounded(a.size()), 1e-14, 2);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_GT(e.residual(), 1e-14);
    }
}

TEST(Box, ValidationAndProjection) {
    BoxConstraint ok = BoxConstraint::single(3, 1, 0.2);
    EXPECT_NO_THROW(ok.validate());
    EXPECT_EQ(ok.project(Vector{{5.0, 5.0, -5.0}}), (Vector{{5.0, 0.2, -5.0}}));
    BoxConstraint bad{Vector{{0.1}}, Vector{{1.0}}};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    BoxConstraint crossed{Vector{{1.0}}, Vector{{-1.0}}};
    EXPECT_THROW(crossed.validate(), std::invalid_argument);
}

TEST(PowerIteration, ProportionalMatrices) {
    const GlobalMatrices gm = assemble(7, 0.3, 1.0);
    const BandedMatrix s = combine(gm.M, 1.0, gm.M);
    EXPECT_NEAR(max_generalized_eig(s, gm.M), 2.0, 1e-10);
}

TEST(PowerIteration, SingleElementClosedForm) {
    const double h = 1.501, k2 = 282.84;
    const GlobalMatrices gm = assemble(1, h, k2);
    const double expected = oracle::largest_generalized_eig_2x2(gm.S.to_dense(), gm.M.to_dense());
    EXPECT_NEAR(max_generalized_eig(gm.S, gm.M, 1e-13) / expected, 1.0, 1e-10);
}

TEST(PowerIteration, MatchesDenseGeneralizedSolverAndResidual) {
    for (int J : {2, 5, 10, 19, 40}) {
        const GlobalMatrices gm = assemble(J, 1.501 / J, 282.84);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(gm.S.to_dense(), gm.M.to_dense());
        const double expected = dense.eigenvalues().maxCoeff();
        const double tol = 1e-10;
        const GeneralizedEig eig = max_generalized_eig_detailed(gm.S, gm.M, tol);
        EXPECT_NEAR(eig.value / expected, 1.0, 1e-8) << "J = " << J;
        const Vector mv = gm.M * eig.vector;
        EXPECT_LE((gm.S * eig.vector - eig.value * mv).norm(), tol * eig.value * mv.norm());
    }
}

TEST(PowerIteration, BudgetExhaustionThrows) {
    const GlobalMatrices gm = assemble(19, 1.501 / 19, 282.84);
    EXPECT_THROW(max_generalized_eig_detailed(gm.S, gm.M, 1e-15, 4), NonConvergence);
}
