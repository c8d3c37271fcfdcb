#include "monospde/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace monospde {

Grid build_grid(const DomainSpec& spec) {
    const std::size_t d = spec.extents.size();
    if (d < 1 || d > 2) throw std::invalid_argument("domain must have 1 or 2 axes, got " + std::to_string(d));
    if (spec.points.size() != d) throw std::invalid_argument("domain: extents and points must have the same length");

    Grid g;
    g.dim_ = static_cast<int>(d);
    for (std::size_t a = 0; a < d; ++a) {
        if (!(spec.extents[a] > 0.0) || !std::isfinite(spec.extents[a]))
            throw std::invalid_argument("domain: extent along axis " + std::to_string(a) + " must be positive");
        if (spec.points[a] < 4)
            throw std::invalid_argument("domain: need at least 4 points along axis " + std::to_string(a));
        g.extents_[a] = spec.extents[a];
        g.points_[a] = spec.points[a];
        g.spacing_[a] = spec.extents[a] / (spec.points[a] - 1);
    }
    if (d == 1) {
        g.extents_[1] = 0.0;
        g.points_[1] = 1;
        g.spacing_[1] = 1.0;
    }

    const std::size_t n = static_cast<std::size_t>(g.points_[0]) * g.points_[1];
    g.interior_.assign(n, 0);
    for (std::size_t node = 0; node < n; ++node) {
        auto [i, j] = g.multi_index(node);
        bool inside = i > 0 && i < g.points_[0] - 1;
        if (d == 2) inside = inside && j > 0 && j < g.points_[1] - 1;
        g.interior_[node] = inside ? 1 : 0;
        if (inside) ++g.interior_count_;
    }
    return g;
}

Point Grid::coord(std::size_t node) const {
    auto [i, j] = multi_index(node);
    return {i * spacing_[0], dim_ == 2 ? j * spacing_[1] : 0.0};
}

double Grid::full_cell_volume() const {
    return dim_ == 2 ? spacing_[0] * spacing_[1] : spacing_[0];
}

double Grid::cell_volume(std::size_t node) const {
    auto [i, j] = multi_index(node);
    double v = spacing_[0];
    if (i == 0 || i == points_[0] - 1) v *= 0.5;
    if (dim_ == 2) {
        v *= spacing_[1];
        if (j == 0 || j == points_[1] - 1) v *= 0.5;
    }
    return v;
}

long Grid::neighbor(std::size_t node, int axis, int offset) const {
    auto idx = multi_index(node);
    const int k = idx[axis] + offset;
    if (k < 0 || k >= points_[axis]) return -1;
    idx[axis] = k;
    return static_cast<long>(index(idx[0], idx[1]));
}

Grid Grid::refined(int factor) const {
    if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
    DomainSpec spec;
    for (int a = 0; a < dim_; ++a) {
        spec.extents.push_back(extents_[a]);
        spec.points.push_back((points_[a] - 1) * factor + 1);
    }
    return build_grid(spec);
}

DistanceField boundary_distance(const Grid& grid) {
    DistanceField df;
    df.rho.assign(grid.node_count(), 0.0);
    df.psi.assign(grid.node_count(), 0.0);
    df.comparability = 1.0;
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (grid.is_boundary(node)) continue;
        const Point x = grid.coord(node);
        std::array<double, 4> faces{x[0], grid.extent(0) - x[0], 0.0, 0.0};
        int nfaces = 2;
        if (grid.dim() == 2) {
            faces[2] = x[1];
            faces[3] = grid.extent(1) - x[1];
            nfaces = 4;
        }
        double r = faces[0];
        double inv_sq = 0.0;
        for (int f = 0; f < nfaces; ++f) {
            r = std::min(r, faces[f]);
            inv_sq += 1.0 / (faces[f] * faces[f]);
        }
        df.rho[node] = r;
        df.psi[node] = 1.0 / std::sqrt(inv_sq);
        df.comparability = std::max(df.comparability, r / df.psi[node]);
    }
    return df;
}

std::size_t Subdomain::size() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), static_cast<unsigned char>(1)));
}

Subdomain carve_subdomain(const Grid& grid, double margin) {
    double min_extent = grid.extent(0);
    if (grid.dim() == 2) min_extent = std::min(min_extent, grid.extent(1));
    if (!(margin > 0.0) || !(margin < 0.5 * min_extent))
        throw std::invalid_argument("subdomain margin must lie in (0, min extent / 2)");

    const auto df = boundary_distance(grid);
    const double tol = 1e-12 * min_extent;
    Subdomain sub;
    sub.mask.assign(grid.node_count(), 0);
    sub.lo = {std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    sub.hi = {-1, -1};
    sub.margin = std::numeric_limits<double>::infinity();
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
        if (df.rho[node] + tol < margin) continue;
        sub.mask[node] = 1;
        sub.margin = std::min(sub.margin, df.rho[node]);
        auto idx = grid.multi_index(node);
        for (int a = 0; a < 2; ++a) {
            sub.lo[a] = std::min(sub.lo[a], idx[a]);
            sub.hi[a] = std::max(sub.hi[a], idx[a]);
        }
    }
    if (sub.hi[0] < 0) throw std::invalid_argument("subdomain with margin " + std::to_string(margin) + " is empty");
    return sub;
}

}  // namespace monospde
