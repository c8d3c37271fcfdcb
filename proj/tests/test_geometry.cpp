#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "monospde/geometry.hpp"
#include "test_support.hpp"

using namespace monospde;
using monospde::test::line;
using monospde::test::square;

TEST(Grid, IntervalFivePointsHasQuarterSpacing) {
    const double expected_h = 0.25;
    const double expected_interior[] = {0.25, 0.5, 0.75};

    const Grid g = line(5);
    EXPECT_DOUBLE_EQ(g.spacing(0), expected_h);
    ASSERT_EQ(g.interior_count(), 3u);
    std::size_t k = 0;
    for (std::size_t n = 0; n < g.node_count(); ++n)
        if (g.is_interior(n)) {
            EXPECT_DOUBLE_EQ(g.coord(n)[0], expected_interior[k++]);
        }
}

TEST(Grid, SquareFiveByFiveHasNineInteriorNodes) {
    EXPECT_EQ(square(5).interior_count(), 9u);
}

TEST(Grid, RejectsNonPositiveExtentAndTooFewPoints) {
    EXPECT_THROW(build_grid(DomainSpec{{0.0, -1.0}, {5, 5}}), std::invalid_argument);
    EXPECT_THROW(build_grid(DomainSpec{{1.0}, {3}}), std::invalid_argument);
    EXPECT_THROW(build_grid(DomainSpec{{1.0}, {5, 5}}), std::invalid_argument);
}

TEST(Grid, IndexRoundTrip) {
    const Grid g = build_grid(DomainSpec{{1.0, 2.0}, {7, 9}});
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        const auto ij = g.multi_index(n);
        EXPECT_EQ(g.index(ij[0], ij[1]), n);
    }
}

TEST(Grid, CellVolumesSumToDomainMeasure) {
    const double expected = 2.0 * 3.0;
    const Grid g = build_grid(DomainSpec{{2.0, 3.0}, {11, 17}});
    double total = 0.0;
    for (std::size_t n = 0; n < g.node_count(); ++n) total += g.cell_volume(n);
    EXPECT_NEAR(total, expected, 1e-12);
}

TEST(Grid, NeighborLeavesGridAsMinusOne) {
    const Grid g = line(6);
    EXPECT_EQ(g.neighbor(0, 0, -1), -1);
    EXPECT_EQ(g.neighbor(5, 0, 1), -1);
    EXPECT_EQ(g.neighbor(2, 0, 1), 3);
}

TEST(Grid, RefinedHalvesSpacing) {
    const Grid g = line(9);
    const Grid r = g.refined(2);
    EXPECT_EQ(r.points(0), 17);
    EXPECT_DOUBLE_EQ(r.spacing(0), g.spacing(0) / 2.0);
}

TEST(BoundaryDistance, IntervalExamples) {
    const Grid g = line(5);
    const DistanceField d = boundary_distance(g);
    EXPECT_DOUBLE_EQ(d.rho[2], 0.5);
    EXPECT_DOUBLE_EQ(d.rho[1], 0.25);
    EXPECT_DOUBLE_EQ(d.rho[0], 0.0);
}

TEST(BoundaryDistance, SquareUsesNearestFace) {
    const double expected = 0.1;
    const Grid g = square(11);
    const DistanceField d = boundary_distance(g);
    EXPECT_NEAR(d.rho[g.index(1, 4)], expected, 1e-15);
}

TEST(BoundaryDistance, RhoIsOneLipschitzAcrossNeighbors) {
    const Grid g = build_grid(DomainSpec{{1.0, 1.5}, {13, 19}});
    const DistanceField d = boundary_distance(g);
    for (std::size_t n = 0; n < g.node_count(); ++n)
        for (int a = 0; a < 2; ++a) {
            const long m = g.neighbor(n, a, 1);
            if (m >= 0) {
                EXPECT_LE(std::abs(d.rho[n] - d.rho[m]), g.spacing(a) * (1.0 + 1e-12));
            }
        }
}

TEST(BoundaryDistance, RefinementLeavesCoincidentNodesUnchanged) {
    const Grid g = square(9);
    const Grid r = g.refined(2);
    const DistanceField dg = boundary_distance(g), dr = boundary_distance(r);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) EXPECT_NEAR(dg.rho[g.index(i, j)], dr.rho[r.index(2 * i, 2 * j)], 1e-15);
}

TEST(BoundaryDistance, PsiComparableToRho) {
    for (const Grid& g : {line(33), square(17)}) {
        const double bound = std::sqrt(2.0 * g.dim());
        const DistanceField d = boundary_distance(g);
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            EXPECT_LE(d.psi[n], d.rho[n] + 1e-15);
            EXPECT_GE(d.psi[n] * bound, d.rho[n] - 1e-15);
        }
        EXPECT_LE(d.comparability, bound + 1e-12);
        EXPECT_GE(d.comparability, 1.0);
    }
}

TEST(Subdomain, IntervalMarginQuarter) {
    const Grid g = line(9);  // h = 0.125
    const Subdomain s = carve_subdomain(g, 0.25);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        const double x = g.coord(n)[0];
        EXPECT_EQ(s.contains(n), x >= 0.25 - 1e-12 && x <= 0.75 + 1e-12) << x;
    }
    EXPECT_EQ(s.size(), 5u);
}

TEST(Subdomain, SquareNineByNineGivesFiveByFiveBlock) {
    EXPECT_EQ(carve_subdomain(square(9), 0.25).size(), 25u);
}

TEST(Subdomain, MarginBeyondHalfExtentIsRejected) {
    EXPECT_THROW(carve_subdomain(line(9), 0.6), std::invalid_argument);
    EXPECT_THROW(carve_subdomain(line(9), 0.0), std::invalid_argument);
}

TEST(Subdomain, MinimumRhoMatchesMarginWithinOneSpacing) {
    for (int points : {9, 17, 33, 50}) {
        const Grid g = line(points);
        const Subdomain s = carve_subdomain(g, 0.3);
        EXPECT_GE(s.margin, 0.3 - 1e-12);
        EXPECT_LE(s.margin, 0.3 + g.spacing(0));
    }
}
