#include "monospde/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace monospde {

std::vector<MultiIndex> multi_indices(int dim, int order) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        out.push_back({order, 0});
        return out;
    }
    for (int gx = order; gx >= 0; --gx) out.push_back({gx, order - gx});
    return out;
}

namespace {

// Applies `op(line values, stride-free accessor)` to every grid line along `axis`.
template <typename Op>
void for_each_line(const Grid& grid, int axis, Op op) {
    const int n = grid.points(axis);
    const int other = axis == 0 ? 1 : 0;
    const int lines = grid.dim() == 2 ? grid.points(other) : 1;
    for (int l = 0; l < lines; ++l) {
        auto node_at = [&](int k) {
            return axis == 0 ? grid.index(k, l) : grid.index(l, k);
        };
        op(n, node_at);
    }
}

Field first_derivative(const Field& u, const Grid& grid, int axis) {
    Field out(u.size(), 0.0);
    const double h = grid.spacing(axis);
    for_each_line(grid, axis, [&](int n, auto node_at) {
        for (int k = 0; k < n; ++k) {
            double v;
            if (k == 0)
                v = (u[node_at(1)] - u[node_at(0)]) / h;
            else if (k == n - 1)
                v = (u[node_at(n - 1)] - u[node_at(n - 2)]) / h;
            else
                v = (u[node_at(k + 1)] - u[node_at(k - 1)]) / (2.0 * h);
            out[node_at(k)] = v;
        }
    });
    return out;
}

Field second_derivative(const Field& u, const Grid& grid, int axis) {
    Field out(u.size(), 0.0);
    const double h2 = grid.spacing(axis) * grid.spacing(axis);
    for_each_line(grid, axis, [&](int n, auto node_at) {
        for (int k = 0; k < n; ++k) {
            const int c = std::clamp(k, 1, n - 2);
            out[node_at(k)] = (u[node_at(c + 1)] - 2.0 * u[node_at(c)] + u[node_at(c - 1)]) / h2;
        }
    });
    return out;
}

double power_or_one(double v, double p) {
    return p == 0.0 ? 1.0 : std::pow(v, p);
}

}  // namespace

Field axis_derivative(const Field& u, const Grid& grid, int axis, int order) {
    if (axis < 0 || axis >= grid.dim()) throw std::invalid_argument("derivative axis out of range");
    switch (order) {
        case 0: return u;
        case 1: return first_derivative(u, grid, axis);
        case 2: return second_derivative(u, grid, axis);
        case 3: return first_derivative(second_derivative(u, grid, axis), grid, axis);
        default: throw std::invalid_argument("derivative order must be in 0..3, got " + std::to_string(order));
    }
}

Field derivative(const Field& u, const Grid& grid, MultiIndex gamma) {
    Field out = axis_derivative(u, grid, 0, gamma.x);
    if (gamma.y > 0) out = axis_derivative(out, grid, 1, gamma.y);
    return out;
}

double integrate(std::span<const double> f, const Grid& grid) {
    double s = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) s += grid.cell_volume(n) * f[n];
    return s;
}

double inner(const Field& u, const Field& v, const Grid& grid) {
    double s = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) s += grid.cell_volume(n) * u[n] * v[n];
    return s;
}

double lp_norm_pow(const Field& u, double p, const Grid& grid) {
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t n = 0; n < u.size(); ++n) s += grid.cell_volume(n) * u[n] * u[n];
    } else {
        for (std::size_t n = 0; n < u.size(); ++n) s += grid.cell_volume(n) * std::pow(std::abs(u[n]), p);
    }
    return s;
}

double lp_norm(const Field& u, double p, const Grid& grid) {
    return std::pow(lp_norm_pow(u, p, grid), 1.0 / p);
}

double sup_norm(const Field& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// sum over edges of weight * (D+u)^2 * edge_factor(u_a, u_b)
template <typename EdgeFactor>
double edge_sum(const Field& u, const Grid& grid, EdgeFactor factor) {
    double s = 0.0;
    const double vol = grid.full_cell_volume();
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const double h = grid.spacing(axis);
        const int other = axis == 0 ? 1 : 0;
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
            const long nb = grid.neighbor(node, axis, +1);
            if (nb < 0) continue;
            double w = vol;
            if (grid.dim() == 2) {
                const int t = grid.multi_index(node)[other];
                if (t == 0 || t == grid.points(other) - 1) w *= 0.5;
            }
            const double d = (u[nb] - u[node]) / h;
            s += w * d * d * factor(u[node], u[nb]);
        }
    }
    return s;
}

}  // namespace

double h1_seminorm_sq(const Field& u, const Grid& grid) {
    return edge_sum(u, grid, [](double, double) { return 1.0; });
}

double gradient_weighted_density(const Field& u, double p, const Grid& grid) {
    if (p == 2.0) return h1_seminorm_sq(u, grid);
    const double e = p - 2.0;
    return edge_sum(u, grid, [e](double a, double b) { return 0.5 * (std::pow(std::abs(a), e) + std::pow(std::abs(b), e)); });
}

double gradient_weighted_integral(std::span<const double> times, std::span<const Field> snapshots, double p,
                                  const Grid& grid) {
    if (times.size() != snapshots.size()) throw std::invalid_argument("times and snapshots differ in length");
    double total = 0.0;
    double prev = snapshots.empty() ? 0.0 : gradient_weighted_density(snapshots[0], p, grid);
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        const double cur = gradient_weighted_density(snapshots[k], p, grid);
        total += 0.5 * (times[k] - times[k - 1]) * (prev + cur);
        prev = cur;
    }
    return total;
}

namespace {

double block_weight(const Grid& grid, const Subdomain& region, std::size_t node) {
    auto idx = grid.multi_index(node);
    double w = 1.0;
    for (int a = 0; a < grid.dim(); ++a) {
        double wa = grid.spacing(a);
        if (region.lo[a] != region.hi[a] && (idx[a] == region.lo[a] || idx[a] == region.hi[a])) wa *= 0.5;
        w *= wa;
    }
    return w;
}

}  // namespace

double sobolev_norm_sq(const Field& u, const Grid& grid, int order, const Subdomain& region) {
    if (order < 0 || order > 3) throw std::invalid_argument("sobolev order must be in 0..3, got " + std::to_string(order));
    double s = 0.0;
    for (int i = 0; i <= order; ++i) {
        for (const auto& gamma : multi_indices(grid.dim(), i)) {
            const Field d = derivative(u, grid, gamma);
            for (std::size_t node = 0; node < grid.node_count(); ++node)
                if (region.contains(node)) s += block_weight(grid, region, node) * d[node] * d[node];
        }
    }
    return s;
}

double sobolev_norm(const Field& u, const Grid& grid, int order, const Subdomain& region) {
    return std::sqrt(sobolev_norm_sq(u, grid, order, region));
}

Field shift(const Field& u, const Grid& grid, int axis, int steps) {
    if (axis < 0 || axis >= grid.dim()) throw std::invalid_argument("shift axis out of range");
    Field out(u.size(), 0.0);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        const long src = grid.neighbor(node, axis, steps);
        if (src >= 0) out[node] = u[src];
    }
    return out;
}

Field difference_quotient(const Field& u, const Grid& grid, int axis, int steps) {
    if (steps == 0) throw std::invalid_argument("difference quotient step must be nonzero");
    Field out = shift(u, grid, axis, steps);
    const double h = steps * grid.spacing(axis);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = (out[n] - u[n]) / h;
    return out;
}

bool theta_in_window(int dim, double q, double theta) {
    return dim - 2.0 + q < theta && theta < dim - 1.0 + q;
}

double weighted_norm_pow(const Field& u, const WeightedNormSpec& spec, const Grid& grid, const DistanceField& dist) {
    if (spec.order < 0 || spec.order > 3)
        throw std::invalid_argument("weighted norm order must be in 0..3, got " + std::to_string(spec.order));
    if (!(spec.q >= 1.0)) throw std::invalid_argument("weighted norm needs q >= 1");
    const int d = grid.dim();
    double s = 0.0;
    for (int i = 0; i <= spec.order; ++i) {
        const double e = spec.theta - d + i * spec.q;
        for (const auto& gamma : multi_indices(d, i)) {
            const Field du = i == 0 ? u : derivative(u, grid, gamma);
            for (std::size_t node = 0; node < grid.node_count(); ++node) {
                const double r = dist.rho[node];
                if (r == 0.0 && e != 0.0) continue;
                s += grid.cell_volume(node) * power_or_one(r, e) * std::pow(std::abs(du[node]), spec.q);
            }
        }
    }
    return s;
}

double weighted_norm_pow(std::span<const Field> components, const WeightedNormSpec& spec, const Grid& grid,
                         const DistanceField& dist) {
    if (spec.order < 0 || spec.order > 3)
        throw std::invalid_argument("weighted norm order must be in 0..3, got " + std::to_string(spec.order));
    if (!(spec.q >= 1.0)) throw std::invalid_argument("weighted norm needs q >= 1");
    const int d = grid.dim();
    double s = 0.0;
    for (int i = 0; i <= spec.order; ++i) {
        const double e = spec.theta - d + i * spec.q;
        for (const auto& gamma : multi_indices(d, i)) {
            Field sq(grid.node_count(), 0.0);
            for (const Field& u : components) {
                const Field du = i == 0 ? u : derivative(u, grid, gamma);
                for (std::size_t node = 0; node < sq.size(); ++node) sq[node] += du[node] * du[node];
            }
            for (std::size_t node = 0; node < grid.node_count(); ++node) {
                const double r = dist.rho[node];
                if (r == 0.0 && e != 0.0) continue;
                s += grid.cell_volume(node) * power_or_one(r, e) * std::pow(sq[node], spec.q / 2.0);
            }
        }
    }
    return s;
}

double weighted_norm(const Field& u, const WeightedNormSpec& spec, const Grid& grid, const DistanceField& dist) {
    return std::pow(weighted_norm_pow(u, spec, grid, dist), 1.0 / spec.q);
}

Field multiply_by_weight(const Field& u, const DistanceField& dist, double power) {
    Field out(u.size(), 0.0);
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double w = dist.psi[n];
        if (power == 0.0)
            out[n] = u[n];
        else if (w > 0.0)
            out[n] = std::pow(w, power) * u[n];
    }
    return out;
}

Field divide_by_weight(const Field& u, const Grid& grid, const DistanceField& dist) {
    Field out(u.size(), 0.0);
    for (std::size_t n = 0; n < u.size(); ++n)
        if (grid.is_interior(n)) out[n] = u[n] / dist.psi[n];
    for (std::size_t n = 0; n < u.size(); ++n) {
        if (grid.is_interior(n)) continue;
        auto idx = grid.multi_index(n);
        std::array<int, 2> step{0, 0};
        for (int a = 0; a < grid.dim(); ++a) {
            if (idx[a] == 0) step[a] = 1;
            else if (idx[a] == grid.points(a) - 1) step[a] = -1;
        }
        const std::size_t n1 = grid.index(idx[0] + step[0], idx[1] + step[1]);
        const std::size_t n2 = grid.index(idx[0] + 2 * step[0], idx[1] + 2 * step[1]);
        out[n] = 2.0 * out[n1] - out[n2];
    }
    return out;
}

EquivalenceReport weighted_equivalence_check(const Field& u, const WeightedNormSpec& spec, const Grid& grid,
                                             const DistanceField& dist) {
    if (spec.order < 1) throw std::invalid_argument("equivalence check needs order >= 1");
    EquivalenceReport rep;
    rep.norm = weighted_norm(u, spec, grid, dist);
    WeightedNormSpec lower = spec;
    lower.order = spec.order - 1;
    rep.equivalent = weighted_norm(u, lower, grid, dist);
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const Field weighted = multiply_by_weight(axis_derivative(u, grid, axis, 1), dist, 1.0);
        rep.equivalent += weighted_norm(weighted, lower, grid, dist);
    }
    rep.ratio = rep.equivalent > 0.0 ? rep.norm / rep.equivalent : 1.0;
    return rep;
}

}  // namespace monospde
