#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "monospde/coefficients.hpp"
#include "monospde/errors.hpp"
#include "monospde/norms.hpp"
#include "test_support.hpp"

using namespace monospde;
using monospde::test::line;
using monospde::test::pi;
using monospde::test::sample;
using monospde::test::square;

namespace {

const double kTimes[] = {0.0, 0.5, 1.0};

Field random_interior(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g.node_count(), 0.0);
    for (std::size_t n = 0; n < f.size(); ++n)
        if (g.is_interior(n)) f[n] = u(rng);
    return f;
}

CoefficientSet general_2d() {
    ConstantCoefficients c;
    c.b = {0.3, -0.2};
    c.c = 0.4;
    c.sigma = 0.5;
    c.mu = 0.2;
    CoefficientSet cs = smooth_coefficients(2, 3, c, 4.0, 0.5, 2);
    cs.a = [](double, Point x) { return Mat2{1.5 + 0.2 * x[0], 0.3, 0.3, 1.0 + 0.1 * x[1]}; };
    return cs;
}

}  // namespace

TEST(Parabolicity, IdentityHasUnitMargin) {
    const double expected = 1.0;
    for (const Grid& g : {line(17), square(9)}) {
        const auto cs = constant_coefficients(g.dim(), 0, {}, 1.0, 1.0, 0);
        EXPECT_NEAR(check_parabolicity(cs, g, kTimes), expected, 1e-12);
    }
}

TEST(Parabolicity, SigmaRootTwoHasZeroMargin) {
    const double expected = 1.0 - 0.5 * 2.0;
    ConstantCoefficients c;
    c.sigma = std::sqrt(2.0);
    const auto cs = constant_coefficients(1, 1, c, 4.0, 1.0, 0);
    EXPECT_NEAR(check_parabolicity(cs, line(17), kTimes), expected, 1e-12);
}

TEST(Parabolicity, AnisotropicDiagonalMarginIsSmallestEigenvalue) {
    const double expected = 2.0;
    const auto cs = anisotropic_coefficients(2, 0, 2.0, 0.0, 3.0, {}, 4.0, 1.0, 0);
    EXPECT_NEAR(check_parabolicity(cs, square(9), kTimes), expected, 1e-12);
}

TEST(Parabolicity, SkewPartDoesNotChangeMargin) {
    const Grid g = square(9);
    auto cs = anisotropic_coefficients(2, 0, 2.0, 0.5, 3.0, {}, 4.0, 1.0, 0);
    const double base = check_parabolicity(cs, g, kTimes);
    cs.a = [](double, Point) { return Mat2{2.0, 0.5 + 1.7, 0.5 - 1.7, 3.0}; };
    EXPECT_NEAR(check_parabolicity(cs, g, kTimes), base, 1e-12);
}

TEST(Parabolicity, NonFiniteCoefficientIsError) {
    auto cs = constant_coefficients(1, 0, {}, 1.0, 1.0, 0);
    cs.a = [](double, Point) { return Mat2::scalar(std::nan("")); };
    EXPECT_THROW(check_parabolicity(cs, line(9), kTimes), NumericalError);
}

TEST(Boundedness, ConstantCoefficientsHaveNoDerivativePart) {
    ConstantCoefficients c;
    c.a = 1.5;
    c.c = -0.7;
    const auto cs = constant_coefficients(1, 0, c, 2.0, 1.0, 2);
    const auto rep = check_boundedness(cs, line(33), 2, kTimes);
    EXPECT_NEAR(rep.derivatives, 0.0, 1e-12);
    EXPECT_NEAR(rep.level, 1.5, 1e-12);
    EXPECT_TRUE(rep.pass);
}

TEST(Boundedness, SineCoefficientBoundNearOne) {
    const double expected = 1.0;  // max of |sin x|, |cos x| on [0, 1]
    auto cs = constant_coefficients(1, 0, {}, 1.0, 1.0, 1);
    cs.a = [](double, Point x) { return Mat2::scalar(std::sin(x[0])); };
    const auto rep = check_boundedness(cs, line(257), 1, kTimes);
    EXPECT_NEAR(rep.worst, expected, 1e-4);
}

TEST(Boundedness, OrderAboveAvailableIsError) {
    const auto cs = constant_coefficients(1, 0, {}, 1.0, 1.0, 1);
    EXPECT_THROW(check_boundedness(cs, line(9), 2, kTimes), std::invalid_argument);
}

TEST(ApplyL, SineIsEigenfunction) {
    const Grid g = line(257);
    const auto cs = constant_coefficients(1, 0, {}, 1.0, 1.0, 0);
    const Field u = test::sine(g);
    const Field lu = apply_L(u, cs, g, 0.0);
    for (std::size_t n = 1; n + 1 < g.node_count(); ++n) EXPECT_NEAR(lu[n], -pi * pi * u[n], 2e-4);
}

TEST(ApplyL, ZeroMapsToZeroAndReactionOnlyIsIdentity) {
    const Grid g = line(17);
    ConstantCoefficients c;
    c.a = 0.0;
    c.c = 1.0;
    const auto cs = constant_coefficients(1, 0, c, 1.0, 1.0, 0);
    const Field u = random_interior(g, 1);
    const Field lu = apply_L(u, cs, g, 0.0);
    const Field l0 = apply_L(Field(g.node_count(), 0.0), cs, g, 0.0);
    for (std::size_t n = 0; n < u.size(); ++n) {
        EXPECT_EQ(l0[n], 0.0);
        if (g.is_interior(n)) {
            EXPECT_DOUBLE_EQ(lu[n], u[n]);
        }
    }
}

TEST(ApplyM, MuOneIsIdentity) {
    const Grid g = line(17);
    ConstantCoefficients c;
    c.mu = 1.0;
    const auto cs = constant_coefficients(1, 1, c, 1.0, 1.0, 0);
    const Field u = random_interior(g, 2);
    const Field mu = apply_M(u, 0, cs, g, 0.0);
    for (std::size_t n = 0; n < u.size(); ++n)
        if (g.is_interior(n)) {
            EXPECT_DOUBLE_EQ(mu[n], u[n]);
        }
}

TEST(ApplyM, SigmaOneDifferentiates) {
    const Grid g = line(65);
    ConstantCoefficients c;
    c.sigma = 1.0;
    const auto cs = constant_coefficients(1, 1, c, 1.0, 1.0, 0);
    const Field u = sample(g, [](Point x) { return x[0] * (1.0 - x[0]); });
    const Field mu = apply_M(u, 0, cs, g, 0.0);
    for (std::size_t n = 1; n + 1 < g.node_count(); ++n) EXPECT_NEAR(mu[n], 1.0 - 2.0 * g.coord(n)[0], 1e-12);
    EXPECT_THROW(apply_M(u, 1, cs, g, 0.0), std::out_of_range);
    EXPECT_THROW(apply_M(u, -1, cs, g, 0.0), std::out_of_range);
}

TEST(Operators, Linearity) {
    const Grid g = square(11);
    const auto cs = general_2d();
    for (unsigned seed = 0; seed < 5; ++seed) {
        const Field u = random_interior(g, seed), v = random_interior(g, seed + 50);
        const double a = 0.7, b = -1.3;
        Field w(u.size());
        for (std::size_t n = 0; n < u.size(); ++n) w[n] = a * u[n] + b * v[n];
        const Field lw = apply_L(w, cs, g, 0.3), lu = apply_L(u, cs, g, 0.3), lv = apply_L(v, cs, g, 0.3);
        for (std::size_t n = 0; n < u.size(); ++n) EXPECT_NEAR(lw[n], a * lu[n] + b * lv[n], 1e-10);
        for (int k = 0; k < cs.modes; ++k) {
            const Field mw = apply_M(w, k, cs, g, 0.3), mu = apply_M(u, k, cs, g, 0.3), mv = apply_M(v, k, cs, g, 0.3);
            for (std::size_t n = 0; n < u.size(); ++n) EXPECT_NEAR(mw[n], a * mu[n] + b * mv[n], 1e-10);
        }
    }
}

TEST(Operators, SummationByPartsIsExact) {
    // <L u, u> = -|grad u|^2 for a = I, and L is self-adjoint for symmetric a.
    for (const Grid& g : {line(64), square(13)}) {
        const auto identity = constant_coefficients(g.dim(), 0, {}, 1.0, 1.0, 0);
        for (unsigned seed = 0; seed < 5; ++seed) {
            const Field u = random_interior(g, seed);
            const double expected = -h1_seminorm_sq(u, g);
            EXPECT_NEAR(inner(apply_L(u, identity, g, 0.0), u, g), expected, 1e-12 * std::abs(expected));
        }
    }
    const Grid g = square(13);
    auto cs = anisotropic_coefficients(2, 0, 2.0, 0.6, 1.0, {}, 4.0, 1.0, 0);
    cs.a = [](double, Point x) { return Mat2{2.0 + x[0], 0.6 * x[1], 0.6 * x[1], 1.0 + x[0] * x[1]}; };
    for (unsigned seed = 0; seed < 5; ++seed) {
        const Field u = random_interior(g, seed), v = random_interior(g, seed + 9);
        const double luv = inner(apply_L(u, cs, g, 0.0), v, g);
        const double ulv = inner(u, apply_L(v, cs, g, 0.0), g);
        EXPECT_NEAR(luv, ulv, 1e-12 * std::abs(luv));
    }
}

TEST(Coercivity, PureDiffusionFitsKappaTwoAndZeroKPrime) {
    const auto cs = constant_coefficients(1, 0, {}, 1.0, 1.0, 0);
    const auto rep = check_discrete_coercivity(cs, line(64), 100, 42);
    EXPECT_GT(rep.kappa_observed, 0.0);
    EXPECT_NEAR(rep.kappa_observed, 2.0, 1e-10);
    EXPECT_LE(rep.k_prime_observed, 1e-8);
}

TEST(Coercivity, FixedSeedIsReproducible) {
    ConstantCoefficients c;
    c.sigma = 0.5;
    c.mu = 0.3;
    const auto cs = constant_coefficients(1, 2, c, 4.0, 0.5, 0);
    const auto a = check_discrete_coercivity(cs, line(33), 1, 7);
    const auto b = check_discrete_coercivity(cs, line(33), 1, 7);
    EXPECT_EQ(a.kappa_observed, b.kappa_observed);
    EXPECT_EQ(a.k_prime_observed, b.k_prime_observed);
}
