#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace monospde {

/// A point or vector in R^d, d <= 2. Unused trailing components are zero.
using Vec2 = std::array<double, 2>;
using Point = Vec2;

/// Row-major 2x2 matrix {a11, a12, a21, a22}.
struct Mat2 {
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

    double operator()(int i, int j) const {
        if (i == 0) return j == 0 ? xx : xy;
        return j == 0 ? yx : yy;
    }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diagonal(double a, double b) { return {a, 0.0, 0.0, b}; }
    static Mat2 scalar(double a) { return {a, 0.0, 0.0, a}; }
};

/// Nodal values over every node of a Grid, boundary nodes included.
using Field = std::vector<double>;

}  // namespace monospde
