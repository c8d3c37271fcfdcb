#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "monospde/coefficients.hpp"
#include "monospde/geometry.hpp"
#include "monospde/linalg.hpp"
#include "monospde/noise.hpp"
#include "monospde/semilinear.hpp"
#include "monospde/types.hpp"

namespace monospde {

enum class Scheme { SemiImplicit, Explicit };

struct SolverConfig {
    double final_time = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::SemiImplicit;
    std::optional<double> truncation;  // level m applied on top of the term's own
    int snapshot_stride = 1;
    double tolerance = 1e-10;          // relative residual of iterative solves
    std::size_t max_iterations = 10000;
    std::vector<double> tracked_p{2.0};
    double blowup_threshold = 1e8;

    /// Throws ConfigError unless 0 < dt <= T, T is an integer number of
    /// steps, tolerance > 0 and stride >= 1.
    void validate() const;
    std::size_t steps() const;
};

/// Everything the equation needs except the driving noise.
struct Problem {
    Grid grid;
    CoefficientSet coeffs;
    ForcingSet forcing;
    SemilinearTerm term;
    Field initial;
};

/// Running statistics for one exponent p:
///   sup over snapshot times of |u_t|^p_{L^p}, and
///   int_0^T int |grad u|^2 |u|^{p-2} dx dt (trapezoid over every step).
struct MomentAccumulator {
    double p = 2.0;
    double sup_lp_pow = 0.0;
    double gradient_integral = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::shared_ptr<const NoisePath> noise;
    Field initial;
    std::vector<MomentAccumulator> moments;
    double sup_abs = 0.0;  // max |u| over all steps

    /// Throws std::out_of_range when p was not tracked.
    const MomentAccumulator& moment(double p) const;
};

/// One time step
///   (I - dt L_{t+dt}) u+ = u + dt (f(t, u, grad u) + f0(t)) + sum_k (M^k_t u + g^k_t) dW^k
/// for the semi-implicit scheme; the explicit scheme uses I on the left and
/// adds dt L_t u on the right. Coefficient-dependent tables and, for
/// time-independent coefficients, the factorized operator are cached.
class Stepper {
public:
    Stepper(const Problem& problem, const SemilinearTerm& term, const SolverConfig& cfg);

    /// Throws LinearSolveError or BlowUpError (`step_index` labels the error).
    Field step(const Field& u, double t, std::span<const double> dW, std::size_t step_index = 0) const;

private:
    struct Tables;
    const Tables& tables_at(double t, Tables& scratch) const;
    Field solve_implicit(const Field& rhs, const Field& guess, double t_new) const;

    const Problem* problem_;
    SemilinearTerm term_;
    SolverConfig cfg_;
    std::shared_ptr<const Tables> fixed_tables_;
    std::shared_ptr<const TridiagonalSolver> fixed_tridiagonal_;
    std::shared_ptr<const SparseMatrix> fixed_system_;
    std::shared_ptr<const SparseMatrix> fixed_operator_;
};

/// Single step with a freshly built Stepper.
Field step(const Field& u, double t, const Problem& problem, const SemilinearTerm& term, std::span<const double> dW,
           const SolverConfig& cfg);

/// Throws ConfigError when the noise path does not match the configuration,
/// NumericalError (BlowUpError, LinearSolveError) from the steps.
Trajectory solve_trajectory(const Problem& problem, std::shared_ptr<const NoisePath> path, const SolverConfig& cfg);

/// One trajectory per truncation level, all driven by the same path. A
/// non-finite level means no truncation.
std::vector<Trajectory> solve_truncated_family(const Problem& problem, std::span<const double> levels,
                                               std::shared_ptr<const NoisePath> path, const SolverConfig& cfg);

}  // namespace monospde
