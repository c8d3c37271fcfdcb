#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "monospde/coefficients.hpp"
#include "monospde/geometry.hpp"
#include "monospde/semilinear.hpp"
#include "monospde/solver.hpp"

namespace monospde::test {

inline constexpr double pi = std::numbers::pi;

inline Grid line(int points, double length = 1.0) { return build_grid(DomainSpec{{length}, {points}}); }

inline Grid square(int points, double length = 1.0) {
    return build_grid(DomainSpec{{length, length}, {points, points}});
}

inline Field sample(const Grid& grid, const std::function<double(Point)>& f) {
    Field u(grid.node_count());
    for (std::size_t n = 0; n < u.size(); ++n) u[n] = f(grid.coord(n));
    return u;
}

inline Field sine(const Grid& grid) {
    return sample(grid, [&](Point x) {
        double v = std::sin(pi * x[0]);
        if (grid.dim() > 1) v *= std::sin(pi * x[1]);
        return v;
    });
}

/// a = I, nothing else: the heat equation.
inline Problem heat_problem(const Grid& grid, int modes = 0, ConstantCoefficients c = {}) {
    return Problem{grid, constant_coefficients(grid.dim(), modes, c, 4.0, 0.5, 2), zero_forcing(modes), zero_term(),
                   sine(grid)};
}

}  // namespace monospde::test
