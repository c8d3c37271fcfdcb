#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "monospde/geometry.hpp"
#include "monospde/linalg.hpp"
#include "monospde/types.hpp"

namespace monospde {

using ScalarFn = std::function<double(double t, Point x)>;
using VectorFn = std::function<Vec2(double t, Point x)>;
using MatrixFn = std::function<Mat2(double t, Point x)>;
using ModeScalarFn = std::function<double(double t, Point x, int k)>;
using ModeVectorFn = std::function<Vec2(double t, Point x, int k)>;

/// Coefficients of
///   L u   = d_j(a^{ij} d_i u) + b^i d_i u + c u
///   M^k u = sigma^{ik} d_i u + mu^k u,   k = 0..modes-1.
/// Evaluators must be pure functions of (t, x).
struct CoefficientSet {
    int modes = 0;
    MatrixFn a;
    VectorFn b;
    ScalarFn c;
    ModeVectorFn sigma;
    ModeScalarFn mu;
    double bound = 1.0;        // K
    double ellipticity = 1.0;  // kappa
    int derivative_order = 0;  // highest order with claimed derivative bounds
    bool time_independent = true;
    bool has_drift = false;  // b != 0 somewhere; the assembled L is then nonsymmetric

    /// Throws std::invalid_argument when a field is missing or K, kappa <= 0.
    void validate() const;
};

/// Free terms f^0 and g^k.
struct ForcingSet {
    int modes = 0;
    ScalarFn f0;
    ModeScalarFn g;
    bool time_independent = true;
};

/// a = a_scale I, b, c constant; sigma^{.k} = sigma / sqrt(modes) e_{k mod d};
/// mu^k = mu / sqrt(modes).
struct ConstantCoefficients {
    double a = 1.0;
    Vec2 b{0.0, 0.0};
    double c = 0.0;
    double sigma = 0.0;
    double mu = 0.0;
};

CoefficientSet constant_coefficients(int dim, int modes, const ConstantCoefficients& p, double bound,
                                     double ellipticity, int derivative_order);

/// Same as constant_coefficients but with a, c, sigma and mu modulated by
/// smooth trigonometric profiles in x.
CoefficientSet smooth_coefficients(int dim, int modes, const ConstantCoefficients& p, double bound,
                                   double ellipticity, int derivative_order);

/// Constant symmetric a = [[a11, a12], [a12, a22]]; the rest as constant_coefficients.
CoefficientSet anisotropic_coefficients(int dim, int modes, double a11, double a12, double a22,
                                        const ConstantCoefficients& rest, double bound, double ellipticity,
                                        int derivative_order);

ForcingSet zero_forcing(int modes);

/// min over sampled (t, x, |xi| = 1) of xi^T (a - sigma sigma^T / 2) xi.
/// In d = 2 the sampled directions are complemented by the exact smallest
/// eigenvalue of the symmetric part. Throws NumericalError on non-finite values.
double check_parabolicity(const CoefficientSet& coeffs, const Grid& grid, std::span<const double> times,
                          int direction_samples = 64);

struct BoundednessReport {
    double level = 0.0;       // max |gamma| = 0 part
    double derivatives = 0.0; // max over 1 <= |gamma| <= order
    double worst = 0.0;
    bool pass = false;        // worst <= K (1 + 1e-6)
};

/// Finite-difference check of coefficient derivative bounds up to `order`.
/// Throws std::invalid_argument when order exceeds coeffs.derivative_order.
BoundednessReport check_boundedness(const CoefficientSet& coeffs, const Grid& grid, int order,
                                    std::span<const double> times);

/// Flux-form discretization of L_t on grid nodes. Boundary rows are empty and
/// boundary columns never appear, so the matrix acts on zero-boundary fields.
/// Diagonal terms use arithmetic-mean midpoint values of a^{ii}; mixed terms
/// average the forward/backward pairings so that
///   <L u, v> = -B(u, v),  B(u, v) = sum_edges a^{ii}_{mid} D_i u D_i v
///                                  + 1/2 sum_nodes a^{ij} (D_i^+ u D_j^+ v + D_i^- u D_j^- v)
/// holds exactly for zero-boundary u, v when b = c = 0.
SparseMatrix assemble_L(const CoefficientSet& coeffs, const Grid& grid, double t);

Field apply_L(const Field& u, const CoefficientSet& coeffs, const Grid& grid, double t);

/// Centered differences for sigma . grad u plus mu^k u on interior nodes.
/// Throws std::out_of_range for k outside [0, modes).
Field apply_M(const Field& u, int k, const CoefficientSet& coeffs, const Grid& grid, double t);

struct CoercivityReport {
    double kappa_observed = 0.0;
    double k_prime_observed = 0.0;
    double kappa_reference = 0.0;  // parabolicity margin used to fit K'
    int trials = 0;
};

/// For random zero-boundary w, r(w) = 2<Lw, w> + sum_k |M^k w|^2 is fitted to
/// r(w) <= -kappa |w|^2_{H^1_0} + K' |w|^2_{L^2}.
CoercivityReport check_discrete_coercivity(const CoefficientSet& coeffs, const Grid& grid, int trials,
                                           std::uint64_t seed, double t = 0.0);

}  // namespace monospde
