#pragma once

#include <span>
#include <vector>

#include "monospde/geometry.hpp"
#include "monospde/types.hpp"

namespace monospde {

/// Multi-index gamma = (gx, gy) for D^gamma.
struct MultiIndex {
    int x = 0;
    int y = 0;
    int order() const { return x + y; }
};

/// All multi-indices with |gamma| == order in dimension `dim`.
std::vector<MultiIndex> multi_indices(int dim, int order);

/// Compact finite-difference derivative along one axis: centered stencils
/// for orders 1 and 2 (order 3 composes them); one-sided at the ends of
/// each grid line. Orders 0..3.
Field axis_derivative(const Field& u, const Grid& grid, int axis, int order);
Field derivative(const Field& u, const Grid& grid, MultiIndex gamma);

/// Trapezoidal quadrature of nodal values.
double integrate(std::span<const double> f, const Grid& grid);
double inner(const Field& u, const Field& v, const Grid& grid);

double lp_norm_pow(const Field& u, double p, const Grid& grid);
/// (sum |u|^p * cell volume)^(1/p). Boundary nodes carry half volume, so
/// u == 1 has norm exactly 1 on the unit interval.
double lp_norm(const Field& u, double p, const Grid& grid);
double sup_norm(const Field& u);

/// |grad u|^2_{L^2} from forward differences over grid edges. This is the
/// pairing under which the flux-form operator integrates by parts exactly.
double h1_seminorm_sq(const Field& u, const Grid& grid);

/// Edge quadrature of int |grad u|^2 |u|^{p-2} dx, with |u|^{p-2} averaged
/// over the two edge endpoints. Equals h1_seminorm_sq when p == 2.
double gradient_weighted_density(const Field& u, double p, const Grid& grid);

/// Trapezoid-in-time integral of gradient_weighted_density over snapshots.
double gradient_weighted_integral(std::span<const double> times, std::span<const Field> snapshots, double p,
                                  const Grid& grid);

/// (sum_{|gamma| <= order} |D^gamma u|^2_{L^2(D')})^(1/2), order 0..3.
double sobolev_norm_sq(const Field& u, const Grid& grid, int order, const Subdomain& region);
double sobolev_norm(const Field& u, const Grid& grid, int order, const Subdomain& region);

/// T_l^h u(x) = u(x + h e_l) with h = steps * spacing; u is extended by zero
/// outside the grid.
Field shift(const Field& u, const Grid& grid, int axis, int steps);
/// (T_l^h u - u) / h.
Field difference_quotient(const Field& u, const Grid& grid, int axis, int steps);

struct WeightedNormSpec {
    int order = 0;  // 0..3
    double q = 2.0;
    double theta = 1.0;
};

/// d - 2 + q < theta < d - 1 + q.
bool theta_in_window(int dim, double q, double theta);

/// sum_{i<=n} sum_{|gamma|=i} int |D^gamma u|^q rho^{theta - d + i q} dx.
/// Throws std::invalid_argument for order > 3 or q < 1.
double weighted_norm_pow(const Field& u, const WeightedNormSpec& spec, const Grid& grid, const DistanceField& dist);
double weighted_norm(const Field& u, const WeightedNormSpec& spec, const Grid& grid, const DistanceField& dist);
/// Same for an l2-valued field (g^1, ..., g^K): |D^gamma u|^q becomes
/// (sum_k |D^gamma u^k|^2)^{q/2}.
double weighted_norm_pow(std::span<const Field> components, const WeightedNormSpec& spec, const Grid& grid,
                         const DistanceField& dist);

/// psi^power * u; psi^power is taken as 0 on the boundary for power > 0.
Field multiply_by_weight(const Field& u, const DistanceField& dist, double power);

/// psi^{-1} u. Boundary values, where both vanish, are filled by linear
/// extrapolation along the inward direction.
Field divide_by_weight(const Field& u, const Grid& grid, const DistanceField& dist);

/// |u|_{H^{n,q}_theta} against |u|_{H^{n-1,q}_theta} + sum_i |psi d_i u|_{H^{n-1,q}_theta}.
struct EquivalenceReport {
    double norm = 0.0;
    double equivalent = 0.0;
    double ratio = 0.0;
};

EquivalenceReport weighted_equivalence_check(const Field& u, const WeightedNormSpec& spec, const Grid& grid,
                                             const DistanceField& dist);

}  // namespace monospde
