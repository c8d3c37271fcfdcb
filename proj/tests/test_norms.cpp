#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "monospde/norms.hpp"
#include "test_support.hpp"

using namespace monospde;
using monospde::test::line;
using monospde::test::pi;
using monospde::test::sample;
using monospde::test::square;

namespace {

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Field u(g.node_count());
    for (double& v : u) v = n(rng);
    return u;
}

}  // namespace

TEST(LpNorm, ConstantOneHasUnitNorm) {
    const Grid g = line(65);
    const Field one(g.node_count(), 1.0);
    for (double p : {1.0, 2.0, 3.5, 8.0}) EXPECT_NEAR(lp_norm(one, p, g), 1.0, 1e-14);
}

TEST(LpNorm, SineHasRootHalfL2Norm) {
    const double expected = std::sqrt(0.5);
    const Grid g = line(129);
    EXPECT_NEAR(lp_norm(test::sine(g), 2.0, g), expected, 1e-4);
}

TEST(LpNorm, HomogeneityAndTriangleInequality) {
    const Grid g = square(17);
    for (unsigned seed = 0; seed < 20; ++seed) {
        const Field u = random_field(g, seed), v = random_field(g, seed + 100);
        Field two_u = u, sum = u;
        for (std::size_t n = 0; n < u.size(); ++n) {
            two_u[n] *= -2.0;
            sum[n] += v[n];
        }
        for (double p : {2.0, 4.0}) {
            EXPECT_NEAR(lp_norm(two_u, p, g), 2.0 * lp_norm(u, p, g), 1e-12);
            EXPECT_LE(lp_norm(sum, p, g), lp_norm(u, p, g) + lp_norm(v, p, g) + 1e-12);
        }
    }
}

TEST(Derivative, CenteredStencilsExactOnQuadratics) {
    const Grid g = line(11);
    const Field u = sample(g, [](Point x) { return 3.0 * x[0] * x[0] - x[0]; });
    const Field d1 = axis_derivative(u, g, 0, 1);
    const Field d2 = axis_derivative(u, g, 0, 2);
    for (std::size_t n = 1; n + 1 < g.node_count(); ++n) {
        EXPECT_NEAR(d1[n], 6.0 * g.coord(n)[0] - 1.0, 1e-12);
        EXPECT_NEAR(d2[n], 6.0, 1e-9);
    }
    EXPECT_THROW(axis_derivative(u, g, 0, 4), std::invalid_argument);
}

TEST(H1Seminorm, SineGivesPiSquaredOverTwo) {
    const double expected = pi * pi / 2.0;
    const Grid g = line(257);
    EXPECT_NEAR(h1_seminorm_sq(test::sine(g), g), expected, 1e-3);
}

TEST(GradientWeighted, ReducesToH1ForPEqualsTwo) {
    const Grid g = square(13);
    const Field u = random_field(g, 7);
    EXPECT_NEAR(gradient_weighted_density(u, 2.0, g), h1_seminorm_sq(u, g), 1e-12);
}

TEST(GradientWeighted, FrozenSineOverUnitTime) {
    const double expected = pi * pi / 2.0;
    const Grid g = line(257);
    const Field u = test::sine(g);
    const std::vector<double> times{0.0, 0.5, 1.0};
    const std::vector<Field> snaps{u, u, u};
    EXPECT_NEAR(gradient_weighted_integral(times, snaps, 2.0, g), expected, 1e-3);
    const std::vector<Field> zeros(3, Field(g.node_count(), 0.0));
    EXPECT_EQ(gradient_weighted_integral(times, zeros, 4.0, g), 0.0);
}

TEST(SobolevNorm, ConstantOnSubdomain) {
    const Grid g = line(65);
    const Subdomain s = carve_subdomain(g, 0.25);
    const double expected = 0.5;  // |D'|
    EXPECT_NEAR(sobolev_norm_sq(Field(g.node_count(), 1.0), g, 1, s), expected, 1e-12);
}

TEST(SobolevNorm, LinearFieldOnCentralBlock) {
    const double expected = (std::pow(0.75, 3) - std::pow(0.25, 3)) / 3.0 + 0.5;
    const Grid g = line(257);
    const Subdomain s = carve_subdomain(g, 0.25);
    const Field u = sample(g, [](Point x) { return x[0]; });
    EXPECT_NEAR(sobolev_norm_sq(u, g, 1, s), expected, 1e-5);
    EXPECT_THROW(sobolev_norm_sq(u, g, 4, s), std::invalid_argument);
}

TEST(DifferenceQuotient, QuadraticGivesTwoXPlusH) {
    const Grid g = line(17);
    const Field u = sample(g, [](Point x) { return x[0] * x[0]; });
    for (int steps : {1, 2, 3}) {
        const double h = steps * g.spacing(0);
        const Field dq = difference_quotient(u, g, 0, steps);
        for (std::size_t n = 0; n + steps < g.node_count(); ++n)
            EXPECT_NEAR(dq[n], 2.0 * g.coord(n)[0] + h, 1e-12);
    }
}

TEST(DifferenceQuotient, LinearFieldGivesSlopeForAnyStep) {
    const Grid g = square(13);
    const Field u = sample(g, [](Point x) { return 2.0 * x[0] - 3.0 * x[1]; });
    for (int steps : {1, 2, 4}) {
        const Field dq = difference_quotient(u, g, 1, steps);
        for (std::size_t n = 0; n < g.node_count(); ++n)
            if (g.neighbor(n, 1, steps) >= 0) {
                EXPECT_NEAR(dq[n], -3.0, 1e-12);
            }
    }
}

TEST(DifferenceQuotient, FirstOrderConvergence) {
    auto error = [](int points) {
        const Grid g = line(points);
        const Subdomain s = carve_subdomain(g, 0.25);
        const Field u = test::sine(g);
        Field e = difference_quotient(u, g, 0, 1);
        for (std::size_t n = 0; n < e.size(); ++n) e[n] -= pi * std::cos(pi * g.coord(n)[0]);
        return sobolev_norm(e, g, 0, s);
    };
    const double ratio = error(65) / error(129);
    EXPECT_GT(ratio, 1.8);
    EXPECT_LT(ratio, 2.2);
}

TEST(Shift, ShiftBackIsIdentityOnAdmissibleNodes) {
    const Grid g = line(21);
    const Field u = random_field(g, 3);
    const Field back = shift(shift(u, g, 0, 2), g, 0, -2);
    for (std::size_t n = 2; n < g.node_count(); ++n) EXPECT_EQ(back[n], u[n]);
}

TEST(WeightedNorm, ConstantOneOracle) {
    const double theta = 1.5;
    const double expected = 2.0 * std::pow(0.5, theta) / theta;
    const WeightedNormSpec spec{0, 2.0, theta};
    for (auto [points, tol] : {std::pair{256, 0.01}, std::pair{1024, 0.0025}}) {
        const Grid g = line(points);
        const double got = weighted_norm_pow(Field(g.node_count(), 1.0), spec, g, boundary_distance(g));
        EXPECT_NEAR(got / expected, 1.0, tol) << points;
    }
}

TEST(WeightedNorm, ThetaEqualsDimensionReducesToLp) {
    const Grid g = square(17);
    const DistanceField d = boundary_distance(g);
    const Field u = random_field(g, 11);
    const double q = 3.0;
    EXPECT_NEAR(weighted_norm(u, {0, q, 2.0}, g, d), lp_norm(u, q, g), 1e-13);
}

TEST(WeightedNorm, ZeroAndHomogeneity) {
    const Grid g = line(33);
    const DistanceField d = boundary_distance(g);
    const WeightedNormSpec spec{2, 4.0, 4.5};
    EXPECT_EQ(weighted_norm(Field(g.node_count(), 0.0), spec, g, d), 0.0);
    const Field u = test::sine(g);
    Field cu = u;
    for (double& v : cu) v *= -3.0;
    EXPECT_NEAR(weighted_norm(cu, spec, g, d), 3.0 * weighted_norm(u, spec, g, d), 1e-12);
    EXPECT_THROW(weighted_norm(u, {4, 2.0, 1.5}, g, d), std::invalid_argument);
}

TEST(WeightedNorm, MeshRefinementChangeShrinks) {
    const WeightedNormSpec spec{1, 2.0, 1.5};
    std::vector<double> values;
    for (int points : {33, 65, 129, 257}) {
        const Grid g = line(points);
        values.push_back(weighted_norm(test::sine(g), spec, g, boundary_distance(g)));
    }
    const double d1 = std::abs(values[1] - values[0]);
    const double d2 = std::abs(values[2] - values[1]);
    const double d3 = std::abs(values[3] - values[2]);
    EXPECT_LT(d2, 0.75 * d1);
    EXPECT_LT(d3, 0.75 * d2);
}

TEST(WeightedNorm, ComponentOverloadMatchesScalar) {
    const Grid g = square(13);
    const DistanceField d = boundary_distance(g);
    const Field u = random_field(g, 5);
    const WeightedNormSpec spec{1, 4.0, 5.5};
    const std::vector<Field> one{u};
    EXPECT_NEAR(weighted_norm_pow(std::span<const Field>(one), spec, g, d), weighted_norm_pow(u, spec, g, d),
                1e-10 * weighted_norm_pow(u, spec, g, d));
    Field neg = u;
    for (double& v : neg) v = -v;
    const std::vector<Field> pair{u, neg};
    // |(u, -u)|_{l2} = sqrt(2) |u|, so the q-th power scales by 2^{q/2}.
    EXPECT_NEAR(weighted_norm_pow(std::span<const Field>(pair), spec, g, d), 4.0 * weighted_norm_pow(u, spec, g, d),
                1e-9 * weighted_norm_pow(u, spec, g, d));
}

TEST(ThetaWindow, OpenInterval) {
    EXPECT_TRUE(theta_in_window(1, 2.0, 1.5));
    EXPECT_FALSE(theta_in_window(1, 2.0, 1.0));
    EXPECT_FALSE(theta_in_window(1, 2.0, 2.0));
    EXPECT_TRUE(theta_in_window(2, 8.0, 8.5));
}

TEST(WeightedEquivalence, ConstantHasUnitRatio) {
    const Grid g = line(65);
    const auto rep = weighted_equivalence_check(Field(g.node_count(), 1.0), {1, 2.0, 1.5}, g, boundary_distance(g));
    EXPECT_NEAR(rep.ratio, 1.0, 1e-12);
}

TEST(WeightedEquivalence, PowersOfRhoStayInFixedBracket) {
    const Grid g = line(129);
    const DistanceField d = boundary_distance(g);
    double lo = 1e300, hi = 0.0;
    for (double s : {1.0, 2.0, 3.0}) {
        Field u(g.node_count());
        for (std::size_t n = 0; n < u.size(); ++n) u[n] = std::pow(d.rho[n], s);
        const auto rep = weighted_equivalence_check(u, {1, 2.0, 1.5}, g, d);
        ASSERT_TRUE(std::isfinite(rep.ratio));
        lo = std::min(lo, rep.ratio);
        hi = std::max(hi, rep.ratio);
    }
    EXPECT_GT(lo, 0.1);
    EXPECT_LT(hi, 10.0);
}

TEST(Weights, DivideThenMultiplyRestoresInterior) {
    const Grid g = square(17);
    const DistanceField d = boundary_distance(g);
    const Field u = test::sine(g);
    const Field back = multiply_by_weight(divide_by_weight(u, g, d), d, 1.0);
    for (std::size_t n = 0; n < u.size(); ++n)
        if (g.is_interior(n)) {
            EXPECT_NEAR(back[n], u[n], 1e-14);
        }
}
