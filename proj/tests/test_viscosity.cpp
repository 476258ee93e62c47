#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "isoprofile/viscosity.hpp"
#include "isoprofile/warped.hpp"
#include "oracles.hpp"

using namespace isoprofile;

namespace {

Profile sampled_from(std::vector<double> x, double (*f)(double)) {
    std::vector<double> y;
    for (double t : x) y.push_back(f(t));
    return Profile::sampled(Normalization::h1, 2, {0.0, 1.0}, std::move(x), std::move(y));
}

} // namespace

TEST(Residuals, SphereIsAnExactSolution) {
    for (int n = 2; n <= 6; ++n) {
        const Profile h = h1_profile(SpaceForm(n, 1.0));
        const auto grid = numerics::cosine_grid(0.0, 1.0, 128);
        const auto second = check_supersolution(h, second_order(n, 1.0), grid, 1e-8);
        EXPECT_TRUE(second.global_pass);
        EXPECT_NEAR(second.worst_residual(), 0.0, 1e-8);
        const auto first = check_supersolution(h, first_order(n, 1.0, oracle::pi), grid, 1e-8);
        EXPECT_TRUE(first.global_pass);
        for (const auto& p : first.points) EXPECT_NEAR(p.residual, 0.0, 1e-10);
    }
}

TEST(Residuals, HandComputedValues) {
    const auto q = std::get<SecondOrder>(second_order(3, 1.0));
    // -X psi - 2 (1 + (p/2)^2)
    EXPECT_DOUBLE_EQ(residual_second_order(q, 0.5, 2.0, -10.0), 5.0 - 4.0);
    const auto z = std::get<FirstOrderZero>(first_order(2, 0.0, 1.0));
    EXPECT_NEAR(residual_first_order(z, 0.4, 0.0), 0.4 - 1.0 / oracle::lambda0_2(1.0), 1e-13);
    EXPECT_THROW(residual_second_order(q, 0.0, 0.0, 0.0), PositivityError);
    EXPECT_THROW(residual_first_order(z, -1.0, 0.0), PositivityError);
    EXPECT_THROW(first_order(2, -1.0, 1.0), DomainError);
    EXPECT_THROW(second_order(1, 1.0), DomainError);
}

TEST(Residuals, ShortDiameterNegativeControl) {
    const Profile h = h1_profile(SpaceForm(2, 1.0));
    const auto grid = numerics::cosine_grid(0.0, 1.0, 65);
    const auto rep = check_supersolution(h, first_order(2, 1.0, 0.5 * oracle::pi), grid, 1e-8);
    EXPECT_FALSE(rep.global_pass);
    EXPECT_EQ(rep.count(Verdict::violation), grid.size());
    // 1/2 - 1/sqrt(2) at the equator
    EXPECT_NEAR(rep.points[32].residual, 0.5 - std::sqrt(0.5), 1e-12);
}

TEST(Residuals, EuclideanPowerLaw) {
    for (int n = 2; n <= 6; ++n) {
        const Profile h = h2_profile(SpaceForm(n, 0.0));
        const auto grid = numerics::linear_grid(0.1, 10.0, 100);
        EXPECT_GT(check_supersolution(h, second_order(n, 0.0), grid, 1e-8).worst_residual(), -1e-8);
    }
}

TEST(Residuals, WrongCurvatureIsDetected) {
    // h1 of the unit sphere is not a supersolution for kappa = 2.
    const Profile h = h1_profile(SpaceForm(3, 1.0));
    const auto grid = numerics::cosine_grid(0.0, 1.0, 33);
    const auto rep = check_supersolution(h, second_order(3, 2.0), grid, 1e-8);
    EXPECT_FALSE(rep.global_pass);
    EXPECT_NEAR(rep.worst_residual(), -2.0, 1e-9);
}

TEST(Subjet, ConvexKinkGivesUnitSlopeInterval) {
    const Profile p = sampled_from(numerics::linear_grid(0.0, 1.0, 41),
                                   [](double t) { return 1.0 + std::abs(t - 0.5); });
    const Subjet s = subjet_at(p, 20);
    ASSERT_FALSE(s.empty);
    EXPECT_NEAR(s.p_lo, -1.0, 1e-12);
    EXPECT_NEAR(s.p_hi, 1.0, 1e-12);
    // Linear pieces admit arbitrarily large curvature at interior slopes,
    // capped by the nearest nodes.
    EXPECT_GT(s.best().X, 0.0);
}

TEST(Subjet, ConcaveKinkIsEmpty) {
    const Profile p = sampled_from(numerics::linear_grid(0.0, 1.0, 41),
                                   [](double t) { return 1.0 - std::abs(t - 0.5); });
    const Subjet s = subjet_at(p, 20);
    EXPECT_TRUE(s.empty);
    EXPECT_THROW(s.best(), DomainError);
}

TEST(Subjet, SmoothConcaveDataReproducesDerivatives) {
    const Profile p = sampled_from(numerics::linear_grid(0.2, 0.8, 257),
                                   [](double t) { return std::log(1.0 + t); });
    const Subjet s = subjet_at(p, 128);
    ASSERT_FALSE(s.empty);
    EXPECT_NEAR(s.p_lo, 1.0 / 1.5, 1e-5);
    EXPECT_NEAR(s.p_hi, 1.0 / 1.5, 1e-5);
    EXPECT_NEAR(s.best().X, -1.0 / 2.25, 1e-2);
}

TEST(Subjet, WindowValidation) {
    const Profile p = sampled_from(numerics::linear_grid(0.0, 1.0, 21), [](double t) { return 1.0 + t * t; });
    EXPECT_THROW(subjet_at(p, 3), OutOfRangeError);
    EXPECT_THROW(subjet_at(p, 18), OutOfRangeError);
    SubjetOptions narrow;
    narrow.half_width = 4;
    EXPECT_THROW(subjet_at(p, 10, narrow), DomainError);
    EXPECT_THROW(subjet_at(h1_profile(SpaceForm(2, 1.0)), 10), DomainError);
}

TEST(SampledCheck, SphereProfilePassesWithoutVacuousPoints) {
    for (int n = 2; n <= 4; ++n) {
        const Profile h = h1_profile(SpaceForm(n, 1.0)).sample(numerics::cosine_grid(0.0, 1.0, 512));
        const auto rep = check_supersolution(h, second_order(n, 1.0), interior_nodes(h, 8), 1e-6);
        EXPECT_TRUE(rep.global_pass);
        EXPECT_EQ(rep.count(Verdict::vacuous), 0u);
        EXPECT_GT(rep.worst_residual(), 0.0);
    }
}

TEST(SampledCheck, MinimumOfTwoProfilesIsVacuousAtTheCorner) {
    // min(h, h(. - 0.1)) style corner: two shifted sphere profiles.
    const auto grid = numerics::linear_grid(0.05, 0.95, 181);
    std::vector<double> y;
    for (double b : grid) y.push_back(std::min(oracle::s2_h1(b), oracle::s2_h1(0.5) - 0.3 * std::abs(b - 0.5)));
    const Profile p = Profile::sampled(Normalization::h1, 2, {0.0, 1.0}, grid, y);
    const auto rep = check_supersolution(p, second_order(2, 1.0), interior_nodes(p, 8), 1e-6);
    EXPECT_EQ(rep.points[90 - 8].verdict, Verdict::vacuous);
    EXPECT_TRUE(std::isnan(rep.points[90 - 8].residual));
}

TEST(SampledCheck, GridMustBeNodes) {
    const Profile h = h1_profile(SpaceForm(2, 1.0)).sample(numerics::cosine_grid(0.0, 1.0, 64));
    const std::vector<double> off{0.5};
    EXPECT_THROW(check_supersolution(h, second_order(2, 1.0), off, 1e-6), AlignmentError);
}

TEST(FdCheck, InteriorOfTheSphereProfile) {
    const auto grid = numerics::cosine_grid(0.0, 1.0, 2048);
    const Profile h = h1_profile(SpaceForm(3, 1.0)).sample(grid);
    std::vector<double> middle;
    for (double b : grid)
        if (b >= 0.1 && b <= 0.9) middle.push_back(b);
    const auto rep = check_supersolution_fd(h, second_order(3, 1.0), middle, 1e-5);
    EXPECT_TRUE(rep.global_pass);
    EXPECT_THROW(check_supersolution_fd(h1_profile(SpaceForm(3, 1.0)), second_order(3, 1.0), middle, 1e-5),
                 DomainError);
}

TEST(Comparison, SyntheticModes) {
    const auto grid = numerics::cosine_grid(0.0, 1.0, 33);
    const Profile ref = h1_profile(SpaceForm(2, 1.0));
    const Profile twice = Profile::closed_form(Normalization::h1, 2, {0.0, 1.0}, [&](double b) {
        ProfilePoint q = ref.at(b);
        q.value *= 2.0;
        return q;
    });
    EXPECT_TRUE(comparison_check(twice, ref, LevyGromov{}, 1e-12, grid).global_pass);
    EXPECT_FALSE(comparison_check(ref, twice, LevyGromov{}, 1e-12, grid).global_pass);
    EXPECT_TRUE(comparison_check(twice, ref, Bbg{1.9}, 1e-12, grid).global_pass);
    EXPECT_FALSE(comparison_check(twice, ref, Bbg{2.1}, 1e-12, grid).global_pass);
    // constant ratio is (weakly) monotone
    EXPECT_TRUE(comparison_check(twice, ref, RatioMonotone{}, 1e-12, grid).global_pass);
    EXPECT_THROW(comparison_check(twice, ref, LevyGromov{}, 1e-12), AlignmentError);
}

TEST(Comparison, RatioMonotoneDetectsIncrease) {
    const auto grid = numerics::linear_grid(0.1, 0.9, 9);
    std::vector<double> hv, rv;
    for (double b : grid) {
        hv.push_back(b);
        rv.push_back(1.0);
    }
    const Profile h = Profile::sampled(Normalization::h2, 2, {0.0, 1.0}, grid, hv);
    const Profile r = Profile::sampled(Normalization::h2, 2, {0.0, 1.0}, grid, rv);
    const auto rep = comparison_check(h, r, RatioMonotone{}, 1e-12);
    EXPECT_FALSE(rep.global_pass);
    EXPECT_NEAR(rep.min_slack(), -0.1, 1e-12);
}

TEST(Comparison, TwoSidedOnTheSphereItself) {
    const SpaceForm sf(3, 1.0);
    const auto grid = numerics::cosine_grid(0.0, 1.0, 33);
    const auto rep = comparison_check(h1_profile(sf), h1_profile(sf), TwoSided{sf.total_volume(), sf.total_volume()},
                                      1e-10, grid);
    EXPECT_TRUE(rep.global_pass);
    EXPECT_NEAR(rep.min_slack(), 0.0, 1e-10);
    EXPECT_THROW(comparison_check(h2_profile(sf), h1_profile(sf), LevyGromov{}, 1e-10, grid), AlignmentError);
}
