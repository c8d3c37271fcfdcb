#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "monospde/errors.hpp"
#include "monospde/linalg.hpp"

using namespace monospde;

namespace {

/// 1D Dirichlet Laplacian stencil (-1, 2, -1) plus a shift.
SparseMatrix laplacian(std::size_t n, double shift, double skew = 0.0) {
    SparseMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> cols;
        std::vector<double> vals;
        if (i > 0) {
            cols.push_back(i - 1);
            vals.push_back(-1.0 - skew);
        }
        cols.push_back(i);
        vals.push_back(2.0 + shift);
        if (i + 1 < n) {
            cols.push_back(i + 1);
            vals.push_back(-1.0 + skew);
        }
        a.append_row(i, cols, vals);
    }
    return a;
}

}  // namespace

TEST(SparseMatrix, DuplicateColumnsAreSummed) {
    SparseMatrix a(1);
    const std::size_t cols[] = {0, 0};
    const double vals[] = {1.5, 2.0};
    a.append_row(0, cols, vals);
    EXPECT_DOUBLE_EQ(a.at(0, 0), 3.5);
    EXPECT_DOUBLE_EQ(a.diagonal(0), 3.5);
}

TEST(SparseMatrix, ShiftedAndSymmetry) {
    const SparseMatrix a = laplacian(5, 0.0);
    EXPECT_TRUE(a.is_symmetric());
    EXPECT_FALSE(laplacian(5, 0.0, 0.3).is_symmetric());
    const SparseMatrix b = a.shifted(1.0, -0.5);
    EXPECT_DOUBLE_EQ(b.at(2, 2), 1.0 - 0.5 * 2.0);
    EXPECT_DOUBLE_EQ(b.at(2, 3), 0.5);
}

TEST(Tridiagonal, SolvesKnownSystem) {
    // Solution x = (1, 2, 3, 4); rhs from the (-1, 2, -1) stencil.
    const std::vector<double> expected{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> rhs{0.0, 0.0, 0.0, 5.0};
    TridiagonalSolver solver({0.0, -1.0, -1.0, -1.0}, {2.0, 2.0, 2.0, 2.0}, {-1.0, -1.0, -1.0, 0.0});
    std::vector<double> x(4);
    solver.solve(rhs, x);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(x[i], expected[i], 1e-14);
}

TEST(Tridiagonal, ZeroPivotIsNumericalError) {
    EXPECT_THROW(TridiagonalSolver({0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}), NumericalError);
}

TEST(Iterative, CgAndBicgstabReachTolerance) {
    const std::size_t n = 50;
    std::vector<double> expected(n);
    for (std::size_t i = 0; i < n; ++i) expected[i] = std::sin(0.3 * i);
    for (double skew : {0.0, 0.4}) {
        const SparseMatrix a = laplacian(n, 0.1, skew);
        const std::vector<double> b = a.multiply(expected);
        std::vector<double> x(n, 0.0);
        const IterativeResult r =
            skew == 0.0 ? preconditioned_cg(a, b, x, 1e-12, 1000) : bicgstab(a, b, x, 1e-12, 1000);
        EXPECT_TRUE(r.converged);
        EXPECT_LE(r.relative_residual, 1e-12);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], expected[i], 1e-8);
    }
}
