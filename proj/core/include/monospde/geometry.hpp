#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "monospde/types.hpp"

namespace monospde {

/// Axis-aligned box (0,L1) or (0,L1)x(0,L2) and its resolution.
struct DomainSpec {
    std::vector<double> extents;  // one length per axis
    std::vector<int> points;      // nodes per axis, boundary included
};

/// Uniform tensor grid on an interval or rectangle. Node index is
/// i + nx * j. Boundary nodes carry the Dirichlet condition u = 0.
class Grid {
public:
    int dim() const { return dim_; }
    double extent(int axis) const { return extents_[axis]; }
    int points(int axis) const { return points_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    std::size_t node_count() const { return interior_.size(); }
    std::size_t interior_count() const { return interior_count_; }

    std::size_t index(int i, int j = 0) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(points_[0]) * j; }
    std::array<int, 2> multi_index(std::size_t node) const {
        return {static_cast<int>(node % points_[0]), static_cast<int>(node / points_[0])};
    }
    Point coord(std::size_t node) const;

    bool is_interior(std::size_t node) const { return interior_[node] != 0; }
    bool is_boundary(std::size_t node) const { return interior_[node] == 0; }
    std::span<const unsigned char> interior_mask() const { return interior_; }

    /// Trapezoidal cell volume: h per axis, halved on boundary lines.
    double cell_volume(std::size_t node) const;
    /// h1 * h2 * ... (full interior cell).
    double full_cell_volume() const;

    /// Neighbor along an axis, or -1 when it leaves the grid.
    long neighbor(std::size_t node, int axis, int offset) const;

    /// Grid with the same extents and `factor` times the intervals per axis.
    Grid refined(int factor) const;

    friend Grid build_grid(const DomainSpec& spec);

private:
    int dim_ = 1;
    std::array<double, 2> extents_{1.0, 1.0};
    std::array<int, 2> points_{1, 1};
    std::array<double, 2> spacing_{1.0, 1.0};
    std::vector<unsigned char> interior_;
    std::size_t interior_count_ = 0;
};

/// Throws std::invalid_argument on non-positive extents or fewer than 4 points per axis.
Grid build_grid(const DomainSpec& spec);

/// Exact distance to the continuum boundary, rho(x) = dist(x, dD), and a
/// smooth boundary weight psi comparable to it.
///
/// rho is only Lipschitz: it has a ridge where two faces are equidistant.
/// psi = (sum over faces of dist_f^-2)^(-1/2) is smooth inside the domain
/// and satisfies rho / sqrt(2d) <= psi <= rho, so it can multiply or divide
/// fields that are then differentiated twice.
struct DistanceField {
    std::vector<double> rho;
    std::vector<double> psi;
    double comparability = 1.0;  // max rho / psi over interior nodes
};

DistanceField boundary_distance(const Grid& grid);

/// Rectangular block of nodes with rho >= margin, strictly inside the domain.
struct Subdomain {
    std::vector<unsigned char> mask;
    double margin = 0.0;  // min rho over the block
    std::array<int, 2> lo{0, 0};
    std::array<int, 2> hi{0, 0};  // inclusive
    bool contains(std::size_t node) const { return mask[node] != 0; }
    std::size_t size() const;
};

/// Throws std::invalid_argument unless 0 < margin < min extent / 2, and
/// when no node satisfies rho >= margin.
Subdomain carve_subdomain(const Grid& grid, double margin);

}  // namespace monospde
