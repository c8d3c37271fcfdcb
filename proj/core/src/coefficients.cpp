#include "monospde/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "monospde/counter_rng.hpp"
#include "monospde/errors.hpp"
#include "monospde/norms.hpp"

namespace monospde {

void CoefficientSet::validate() const {
    if (!a || !b || !c || !sigma || !mu) throw std::invalid_argument("coefficient set has an unset field");
    if (!(bound > 0.0)) throw std::invalid_argument("coefficient bound K must be positive");
    if (!(ellipticity > 0.0)) throw std::invalid_argument("ellipticity kappa must be positive");
    if (modes < 0) throw std::invalid_argument("number of noise modes must be non-negative");
}

namespace {

Vec2 mode_direction(int dim, int k, double scale) {
    Vec2 v{0.0, 0.0};
    v[k % dim] = scale;
    return v;
}

double per_mode(double value, int modes) {
    return modes > 0 ? value / std::sqrt(static_cast<double>(modes)) : 0.0;
}

}  // namespace

CoefficientSet constant_coefficients(int dim, int modes, const ConstantCoefficients& p, double bound,
                                     double ellipticity, int derivative_order) {
    CoefficientSet cs;
    cs.modes = modes;
    cs.a = [a = p.a](double, Point) { return Mat2::scalar(a); };
    cs.b = [b = p.b](double, Point) { return b; };
    cs.c = [c = p.c](double, Point) { return c; };
    const double s = per_mode(p.sigma, modes);
    const double m = per_mode(p.mu, modes);
    cs.sigma = [dim, s](double, Point, int k) { return mode_direction(dim, k, s); };
    cs.mu = [m](double, Point, int) { return m; };
    cs.bound = bound;
    cs.ellipticity = ellipticity;
    cs.derivative_order = derivative_order;
    cs.has_drift = p.b[0] != 0.0 || p.b[1] != 0.0;
    return cs;
}

CoefficientSet smooth_coefficients(int dim, int modes, const ConstantCoefficients& p, double bound,
                                   double ellipticity, int derivative_order) {
    using std::numbers::pi;
    CoefficientSet cs;
    cs.modes = modes;
    cs.a = [a = p.a](double, Point x) {
        return Mat2::scalar(a * (1.0 + 0.25 * std::sin(2.0 * pi * x[0]) * std::cos(pi * x[1])));
    };
    cs.b = [b = p.b](double, Point x) {
        const double w = 1.0 + 0.25 * std::cos(pi * x[0]);
        return Vec2{b[0] * w, b[1] * w};
    };
    cs.c = [c = p.c](double, Point x) { return c * std::cos(pi * x[0]); };
    const double s = per_mode(p.sigma, modes);
    const double m = per_mode(p.mu, modes);
    cs.sigma = [dim, s](double, Point x, int k) {
        return mode_direction(dim, k, s * (1.0 + 0.25 * std::cos(pi * (k + 1) * x[0])));
    };
    cs.mu = [m](double, Point x, int k) { return m * std::sin(pi * (k + 1) * x[0] + 0.5); };
    cs.bound = bound;
    cs.ellipticity = ellipticity;
    cs.derivative_order = derivative_order;
    cs.has_drift = p.b[0] != 0.0 || p.b[1] != 0.0;
    return cs;
}

CoefficientSet anisotropic_coefficients(int dim, int modes, double a11, double a12, double a22,
                                        const ConstantCoefficients& rest, double bound, double ellipticity,
                                        int derivative_order) {
    CoefficientSet cs = constant_coefficients(dim, modes, rest, bound, ellipticity, derivative_order);
    const Mat2 a = dim == 1 ? Mat2{a11, 0.0, 0.0, 0.0} : Mat2{a11, a12, a12, a22};
    cs.a = [a](double, Point) { return a; };
    return cs;
}

ForcingSet zero_forcing(int modes) {
    ForcingSet fs;
    fs.modes = modes;
    fs.f0 = [](double, Point) { return 0.0; };
    fs.g = [](double, Point, int) { return 0.0; };
    return fs;
}

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericalError(std::string("non-finite coefficient value in ") + what);
}

}  // namespace

double check_parabolicity(const CoefficientSet& coeffs, const Grid& grid, std::span<const double> times,
                          int direction_samples) {
    coeffs.validate();
    const int d = grid.dim();
    double margin = std::numeric_limits<double>::infinity();
    for (double t : times) {
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
            const Point x = grid.coord(node);
            const Mat2 a = coeffs.a(t, x);
            double s11 = a.xx, s22 = a.yy, s12 = 0.5 * (a.xy + a.yx);
            for (int k = 0; k < coeffs.modes; ++k) {
                const Vec2 s = coeffs.sigma(t, x, k);
                s11 -= 0.5 * s[0] * s[0];
                s22 -= 0.5 * s[1] * s[1];
                s12 -= 0.5 * s[0] * s[1];
            }
            require_finite(s11, "a/sigma");
            if (d == 1) {
                margin = std::min(margin, s11);
                continue;
            }
            require_finite(s22, "a/sigma");
            require_finite(s12, "a/sigma");
            const double mean = 0.5 * (s11 + s22);
            const double rad = std::hypot(0.5 * (s11 - s22), s12);
            margin = std::min(margin, mean - rad);
            for (int m = 0; m < direction_samples; ++m) {
                const double phi = 2.0 * std::numbers::pi * m / direction_samples;
                const double c = std::cos(phi), s = std::sin(phi);
                margin = std::min(margin, s11 * c * c + 2.0 * s12 * c * s + s22 * s * s);
            }
        }
    }
    return margin;
}

BoundednessReport check_boundedness(const CoefficientSet& coeffs, const Grid& grid, int order,
                                    std::span<const double> times) {
    coeffs.validate();
    if (order < 0) throw std::invalid_argument("boundedness order must be non-negative");
    if (order > coeffs.derivative_order)
        throw std::invalid_argument("boundedness order " + std::to_string(order) +
                                    " exceeds the available derivative order " +
                                    std::to_string(coeffs.derivative_order));
    if (order > 3) throw std::invalid_argument("boundedness order must be at most 3");

    const int d = grid.dim();
    const std::size_t nn = grid.node_count();
    BoundednessReport rep;
    for (double t : times) {
        // Sample each scalar component on the grid.
        std::vector<Field> scalars;  // a^{ij}, b^i, c
        std::vector<Field> l2_parts; // sigma^{ik}, mu^k
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) scalars.emplace_back(nn);
        for (int i = 0; i < d; ++i) scalars.emplace_back(nn);
        scalars.emplace_back(nn);
        for (int k = 0; k < coeffs.modes; ++k) {
            for (int i = 0; i < d; ++i) l2_parts.emplace_back(nn);
            l2_parts.emplace_back(nn);
        }
        for (std::size_t node = 0; node < nn; ++node) {
            const Point x = grid.coord(node);
            const Mat2 a = coeffs.a(t, x);
            const Vec2 b = coeffs.b(t, x);
            std::size_t s = 0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) scalars[s++][node] = a(i, j);
            for (int i = 0; i < d; ++i) scalars[s++][node] = b[i];
            scalars[s++][node] = coeffs.c(t, x);
            std::size_t l = 0;
            for (int k = 0; k < coeffs.modes; ++k) {
                const Vec2 sg = coeffs.sigma(t, x, k);
                for (int i = 0; i < d; ++i) l2_parts[l++][node] = sg[i];
                l2_parts[l++][node] = coeffs.mu(t, x, k);
            }
        }
        for (int level = 0; level <= order; ++level) {
            for (const auto& gamma : multi_indices(d, level)) {
                double worst = 0.0;
                for (const auto& f : scalars) {
                    const Field df = derivative(f, grid, gamma);
                    for (double v : df) {
                        require_finite(v, "a/b/c");
                        worst = std::max(worst, std::abs(v));
                    }
                }
                std::vector<double> l2(nn, 0.0);
                for (const auto& f : l2_parts) {
                    const Field df = derivative(f, grid, gamma);
                    for (std::size_t node = 0; node < nn; ++node) l2[node] += df[node] * df[node];
                }
                for (double v : l2) {
                    require_finite(v, "sigma/mu");
                    worst = std::max(worst, v);
                }
                if (level == 0)
                    rep.level = std::max(rep.level, worst);
                else
                    rep.derivatives = std::max(rep.derivatives, worst);
            }
        }
    }
    rep.worst = std::max(rep.level, rep.derivatives);
    rep.pass = rep.worst <= coeffs.bound * (1.0 + 1e-6);
    return rep;
}

SparseMatrix assemble_L(const CoefficientSet& coeffs, const Grid& grid, double t) {
    const int d = grid.dim();
    SparseMatrix m(grid.node_count());
    std::vector<std::size_t> cols;
    std::vector<double> vals;

    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        cols.clear();
        vals.clear();
        if (grid.is_interior(node)) {
            const auto idx = grid.multi_index(node);
            auto add = [&](int di, int dj, double v) {
                const std::size_t target = grid.index(idx[0] + di, idx[1] + dj);
                if (!grid.is_interior(target)) return;
                cols.push_back(target);
                vals.push_back(v);
            };
            auto offset_point = [&](int di, int dj) {
                return grid.coord(grid.index(idx[0] + di, idx[1] + dj));
            };
            auto unit = [](int axis, int s) { return axis == 0 ? std::array<int, 2>{s, 0} : std::array<int, 2>{0, s}; };

            const Point x = grid.coord(node);
            const Mat2 ac = coeffs.a(t, x);
            const Vec2 b = coeffs.b(t, x);

            for (int i = 0; i < d; ++i) {
                const double h = grid.spacing(i);
                const auto ep = unit(i, 1);
                const auto em = unit(i, -1);
                const double a_plus = 0.5 * (ac(i, i) + coeffs.a(t, offset_point(ep[0], ep[1]))(i, i));
                const double a_minus = 0.5 * (ac(i, i) + coeffs.a(t, offset_point(em[0], em[1]))(i, i));
                add(0, 0, -(a_plus + a_minus) / (h * h));
                add(ep[0], ep[1], a_plus / (h * h));
                add(em[0], em[1], a_minus / (h * h));
                add(ep[0], ep[1], b[i] / (2.0 * h));
                add(em[0], em[1], -b[i] / (2.0 * h));
            }
            add(0, 0, coeffs.c(t, x));

            if (d == 2) {
                // 1/2 [D_j^-(A D_i^+ u) + D_j^+(A D_i^- u)],  A = a^{ij}
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        if (i == j) continue;
                        const auto ei = unit(i, 1);
                        const auto ej = unit(j, 1);
                        const double w = 0.5 / (grid.spacing(i) * grid.spacing(j));
                        const double a_here = ac(i, j);
                        const double a_back = coeffs.a(t, offset_point(-ej[0], -ej[1]))(i, j);
                        const double a_fwd = coeffs.a(t, offset_point(ej[0], ej[1]))(i, j);
                        // D_j^-(A D_i^+ u)
                        add(ei[0], ei[1], w * a_here);
                        add(0, 0, -w * a_here);
                        add(ei[0] - ej[0], ei[1] - ej[1], -w * a_back);
                        add(-ej[0], -ej[1], w * a_back);
                        // D_j^+(A D_i^- u)
                        add(ej[0], ej[1], w * a_fwd);
                        add(ej[0] - ei[0], ej[1] - ei[1], -w * a_fwd);
                        add(0, 0, -w * a_here);
                        add(-ei[0], -ei[1], w * a_here);
                    }
                }
            }
        }
        m.append_row(node, cols, vals);
    }
    return m;
}

Field apply_L(const Field& u, const CoefficientSet& coeffs, const Grid& grid, double t) {
    return assemble_L(coeffs, grid, t).multiply(u);
}

Field apply_M(const Field& u, int k, const CoefficientSet& coeffs, const Grid& grid, double t) {
    if (k < 0 || k >= coeffs.modes)
        throw std::out_of_range("noise mode " + std::to_string(k) + " outside [0, " + std::to_string(coeffs.modes) + ")");
    Field out(u.size(), 0.0);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (!grid.is_interior(node)) continue;
        const Point x = grid.coord(node);
        const Vec2 s = coeffs.sigma(t, x, k);
        double v = coeffs.mu(t, x, k) * u[node];
        for (int i = 0; i < grid.dim(); ++i) {
            const double up = u[grid.neighbor(node, i, +1)];
            const double um = u[grid.neighbor(node, i, -1)];
            v += s[i] * (up - um) / (2.0 * grid.spacing(i));
        }
        out[node] = v;
    }
    return out;
}

CoercivityReport check_discrete_coercivity(const CoefficientSet& coeffs, const Grid& grid, int trials,
                                           std::uint64_t seed, double t) {
    const double times[] = {t};
    CoercivityReport rep;
    rep.trials = trials;
    rep.kappa_reference = std::max(0.0, check_parabolicity(coeffs, grid, times));
    const SparseMatrix lmat = assemble_L(coeffs, grid, t);

    struct Sample {
        double r, grad_sq, l2_sq;
    };
    std::vector<Sample> samples;
    for (int trial = 0; trial < trials; ++trial) {
        Field w(grid.node_count(), 0.0);
        for (std::size_t node = 0; node < grid.node_count(); ++node)
            if (grid.is_interior(node))
                w[node] = 2.0 * counter_rng::uniform(counter_rng::hash({seed, 0xc0e7ULL, std::uint64_t(trial), node})) - 1.0;
        const Field lw = lmat.multiply(w);
        double r = 2.0 * inner(lw, w, grid);
        for (int k = 0; k < coeffs.modes; ++k) r += lp_norm_pow(apply_M(w, k, coeffs, grid, t), 2.0, grid);
        const double g = h1_seminorm_sq(w, grid);
        if (g == 0.0) continue;
        samples.push_back({r, g, lp_norm_pow(w, 2.0, grid)});
    }
    if (samples.empty()) return rep;

    double kp = 0.0;
    for (const auto& s : samples) kp = std::max(kp, (s.r + rep.kappa_reference * s.grad_sq) / s.l2_sq);
    double kappa = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) kappa = std::min(kappa, (kp * s.l2_sq - s.r) / s.grad_sq);
    rep.k_prime_observed = kp;
    rep.kappa_observed = kappa;
    return rep;
}

}  // namespace monospde
