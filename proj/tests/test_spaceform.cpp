#include <cmath>

#include <gtest/gtest.h>

#include "isoprofile/spaceform.hpp"
#include "oracles.hpp"

using namespace isoprofile;

TEST(SpaceForm, UnitBallAndSphereMeasures) {
    EXPECT_NEAR(unit_ball_volume(2), oracle::pi, 1e-15);
    EXPECT_NEAR(unit_ball_volume(3), 4.0 * oracle::pi / 3.0, 1e-14);
    for (int m = 1; m <= 8; ++m) EXPECT_NEAR(unit_sphere_area(m), oracle::sphere_area(m), 1e-12);
}

TEST(SpaceForm, TotalVolumeOfSpheres) {
    for (int n = 2; n <= 6; ++n) {
        EXPECT_NEAR(SpaceForm(n, 1.0).total_volume(), oracle::sphere_area(n), 1e-10);
        // radius 1/2 sphere
        EXPECT_NEAR(SpaceForm(n, 4.0).total_volume(), oracle::sphere_area(n) / std::pow(2.0, n), 1e-10);
    }
    EXPECT_TRUE(std::isinf(SpaceForm(3, 0.0).total_volume()));
    EXPECT_TRUE(std::isinf(SpaceForm(3, -1.0).total_volume()));
}

TEST(SpaceForm, BallVolumeAgainstReductionFormula) {
    for (int n = 2; n <= 6; ++n) {
        const SpaceForm sf(n, 1.0);
        for (double r : {0.01, 0.5, 1.5, 2.9, oracle::pi})
            EXPECT_NEAR(sf.ball_volume(r), oracle::cap_volume(n, r), 1e-11) << "n=" << n << " r=" << r;
    }
    const SpaceForm hyp(2, -1.0);
    EXPECT_NEAR(hyp.ball_volume(2.0), 2.0 * oracle::pi * (std::cosh(2.0) - 1.0), 1e-10);
    EXPECT_NEAR(SpaceForm(3, 0.0).ball_volume(2.0), 4.0 * oracle::pi * 8.0 / 3.0, 1e-11);
}

TEST(SpaceForm, BallRadiusInvertsVolume) {
    for (double kappa : {1.0, 0.0, -1.0, 2.5}) {
        const SpaceForm sf(3, kappa);
        for (double r : {0.05, 0.7, 1.3}) EXPECT_NEAR(sf.ball_radius(sf.ball_volume(r)), r, 1e-11);
    }
    const SpaceForm s2(2, 1.0);
    EXPECT_NEAR(s2.ball_radius(2.0 * oracle::pi), 0.5 * oracle::pi, 1e-12);
    EXPECT_NEAR(s2.ball_radius(4.0 * oracle::pi * 0.9), oracle::pi - s2.ball_radius(4.0 * oracle::pi * 0.1),
                1e-12);
    EXPECT_THROW(s2.ball_radius(0.0), DomainError);
    EXPECT_THROW(s2.ball_radius(4.0 * oracle::pi), DomainError);
}

TEST(SpaceForm, RejectsBadArguments) {
    EXPECT_THROW(SpaceForm(1, 1.0), DomainError);
    EXPECT_THROW(SpaceForm(2, std::nan("")), DomainError);
    EXPECT_THROW(SpaceForm(2, 1.0).ball_area(-0.1), DomainError);
    EXPECT_THROW(SpaceForm(2, 1.0).ball_area(4.0), DomainError);
}

TEST(ProfileH1, TwoSphereClosedForm) {
    const SpaceForm s2(2, 1.0);
    for (double beta : {1e-6, 0.01, 0.25, 0.5, 0.8, 0.999}) {
        const ProfilePoint q = profile_h1(s2, beta);
        EXPECT_NEAR(q.value, oracle::s2_h1(beta), 1e-12) << beta;
        // d/dbeta sqrt(beta (1 - beta))
        EXPECT_NEAR(q.slope, (1.0 - 2.0 * beta) / (2.0 * oracle::s2_h1(beta)), 1e-7 / beta);
    }
    const ProfilePoint eq = profile_h1(s2, 0.5);
    EXPECT_NEAR(eq.value, 0.5, 1e-15);
    EXPECT_NEAR(eq.slope, 0.0, 1e-12);
    EXPECT_NEAR(eq.curvature, -2.0, 1e-12);
}

TEST(ProfileH1, HigherSpheresAgainstBisection) {
    for (int n = 3; n <= 6; ++n) {
        const SpaceForm sf(n, 1.0);
        for (double beta : {0.02, 0.3, 0.5, 0.77})
            EXPECT_NEAR(profile_h1(sf, beta).value, oracle::sphere_h1(n, beta), 1e-11);
    }
}

TEST(ProfileH1, IndependentOfCurvatureScale) {
    for (double beta : {0.1, 0.4}) {
        EXPECT_NEAR(profile_h1(SpaceForm(3, 1.0), beta).value * std::sqrt(4.0),
                    profile_h1(SpaceForm(3, 4.0), beta).value, 1e-12);
    }
}

TEST(ProfileH1, RequiresFiniteVolumeAndOpenFraction) {
    EXPECT_THROW(profile_h1(SpaceForm(2, 0.0), 0.5), DomainError);
    EXPECT_THROW(profile_h1(SpaceForm(2, 1.0), 0.0), DomainError);
    EXPECT_THROW(profile_h1(SpaceForm(2, 1.0), 1.0), DomainError);
}

TEST(ProfileH2, EuclideanPowerLaw) {
    for (int n = 2; n <= 6; ++n) {
        const SpaceForm e(n, 0.0);
        const double sigma = std::pow(oracle::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
        for (double beta : {0.1, 1.0, 7.5}) {
            const double expect = n * std::pow(sigma, 1.0 / n) * std::pow(beta, (n - 1.0) / n);
            EXPECT_NEAR(profile_h2(e, beta).value, expect, 1e-11 * expect);
        }
    }
    // unit disk: perimeter 2 pi
    EXPECT_NEAR(profile_h2(SpaceForm(2, 0.0), oracle::pi).value, 2.0 * oracle::pi, 1e-12);
}

TEST(ProfileH2, HyperbolicPlaneIsoperimetricEquality) {
    // In H^2 a disc of area A has perimeter sqrt(A (A + 4 pi)).
    const SpaceForm h(2, -1.0);
    for (double a : {0.1, 2.0, 30.0}) EXPECT_NEAR(profile_h2(h, a).value, std::sqrt(a * (a + 4.0 * oracle::pi)), 1e-10);
}

TEST(ProfileH2, MatchesScaledH1) {
    const SpaceForm sf(4, 1.0);
    const double total = sf.total_volume();
    for (double beta : {0.2, 0.6})
        EXPECT_NEAR(profile_h2(sf, beta * total).value, total * profile_h1(sf, beta).value, 1e-10);
}

TEST(Asymptotics, SmallVolumeConstant) {
    for (int n = 2; n <= 4; ++n) {
        const SpaceForm sf(n, 1.0);
        const double c = asymptotic_constant(n, sf.total_volume());
        const double beta = 1e-8;
        EXPECT_NEAR(profile_h1(sf, beta).value / std::pow(beta, (n - 1.0) / n), c, 1e-3 * c);
    }
    EXPECT_THROW(asymptotic_constant(1, 1.0), DomainError);
    EXPECT_THROW(asymptotic_constant(2, 0.0), DomainError);
}

TEST(ScaleProfile, AgreesWithRescaledSpaceForm) {
    // c g on the unit sphere is the sphere of curvature 1/c.
    const double c = 2.25;
    for (int n : {2, 3, 5}) {
        const Profile scaled = scale_profile(h2_profile(SpaceForm(n, 1.0)), c);
        const Profile direct = h2_profile(SpaceForm(n, 1.0 / c));
        EXPECT_NEAR(scaled.domain().hi, direct.domain().hi, 1e-10);
        for (double f : {0.1, 0.5, 0.85}) {
            const double beta = f * direct.domain().hi;
            const ProfilePoint a = scaled.at(beta);
            const ProfilePoint b = direct.at(beta);
            EXPECT_NEAR(a.value, b.value, 1e-10 * b.value);
            EXPECT_NEAR(a.slope, b.slope, 1e-9);
            EXPECT_NEAR(a.curvature, b.curvature, 1e-9 * std::abs(b.curvature));
        }
    }
    EXPECT_THROW(scale_profile(h1_profile(SpaceForm(2, 1.0)), 2.0), DomainError);
}

TEST(ScaleProfile, SampledProfilesScaleNodes) {
    const Profile p = h2_profile(SpaceForm(2, 1.0));
    const auto grid = numerics::cosine_grid(0.0, p.domain().hi, 17);
    const Profile s = scale_profile(p.sample(grid), 4.0);
    ASSERT_EQ(s.size(), grid.size());
    EXPECT_NEAR(s.betas()[8], 4.0 * grid[8], 1e-12);
    EXPECT_NEAR(s.values()[8], 2.0 * p.value(grid[8]), 1e-12);
}

TEST(Profile, SampledInterpolationAndValidation) {
    const Profile p = Profile::sampled(Normalization::h1, 2, {0.0, 1.0}, {0.1, 0.2, 0.4}, {1.0, 2.0, 6.0});
    EXPECT_DOUBLE_EQ(p.value(0.3), 4.0);
    EXPECT_THROW(p.value(0.05), DomainError);
    EXPECT_THROW(p.at(0.2), DomainError);
    EXPECT_THROW(Profile::sampled(Normalization::h1, 2, {0.0, 1.0}, {0.2, 0.1}, {1.0, 1.0}), DomainError);
    EXPECT_THROW(Profile::sampled(Normalization::h1, 2, {0.0, 1.0}, {0.1}, {1.0, 1.0}), AlignmentError);
}
