#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "monospde/norms.hpp"
#include "monospde/scenario.hpp"
#include "monospde/solver.hpp"

namespace monospde {

/// Sample mean and standard error of the mean (0 for a single sample).
struct Statistic {
    double mean = 0.0;
    double std_error = 0.0;
};
Statistic summarize(std::span<const double> values);

struct RunOptions {
    int workers = 1;
};

/// Verdicts: "pass" (0 <= 0 by convention, or no refinement requested),
/// "stable"/"unstable" (refinement study), "bounded"/"unbounded"
/// (truncation sweep), "fail" (Hoelder threshold), "violation" (RHS = 0 <
/// LHS), "degenerate" (all Hoelder moments vanish).
struct EstimateReport {
    std::string estimate_id;
    Statistic lhs;
    Statistic rhs;
    std::optional<double> n_emp;  // LHS / RHS, absent when RHS = 0
    int samples = 0;
    std::string config_hash;
    std::string verdict;
    std::vector<std::string> warnings;
    nlohmann::json details = nlohmann::json::object();

    /// Verdicts that should not fail a run.
    bool passed() const;
};

nlohmann::json to_json(const EstimateReport& report);
/// One CSV row per report; refinement_ratio, gamma_fit and implied_order are
/// left empty when the report has none.
std::string report_csv_header();
std::string report_csv_row(const EstimateReport& report);

/// LHS / RHS, or nothing when RHS == 0.
std::optional<double> empirical_constant(double lhs, double rhs);

/// Data functional |phi|^p_{L^p} + int_0^T (|f0_t|^p_{L^p} + | |g_t|_{l2} |^p_{L^p}) dt,
/// trapezoid over the solver steps.
double moment_data_functional(const Problem& problem, const SolverConfig& cfg, double p);

/// sup_t |u_t|^p_{L^p} + int int |grad u|^2 |u|^{p-2} for one trajectory.
double moment_lhs(const Trajectory& traj, double p);

/// Per-axis interior regularity sides for one trajectory on D'.
struct InteriorSample {
    std::vector<double> lhs;  // per axis
    double rhs = 0.0;
};
InteriorSample interior_sample(const Problem& problem, const SolverConfig& cfg, const Trajectory& traj,
                               const Subdomain& region);

/// Weighted regularity for one trajectory:
///   lhs    = int_0^T |psi^{-1} u_t|^q_{H^{n,q}_theta} dt
///   first  = int_0^T sum_i |d_i u_t|^q_{H^{n-1,q}_theta} dt
///   second = int_0^T sum_{ij} |psi d_i d_j u_t|^q_{H^{n-2,q}_theta} dt
/// and the data side |psi^{2/q-1} phi|^q_{H^{n,q}_theta}
///   + int (| |g|_{l2} |^q_{H^{n-1,q}_theta} + |f0|^q_{H^{n-2,q}_theta}) dt.
struct WeightedSample {
    double lhs = 0.0;
    double first = 0.0;
    double second = 0.0;
};
WeightedSample weighted_sample(const Trajectory& traj, const Grid& grid, const DistanceField& dist,
                               const WeightedNormSpec& spec);
double weighted_data_functional(const Problem& problem, const SolverConfig& cfg, const DistanceField& dist,
                                const WeightedNormSpec& spec);

/// Least-squares slope of log m against log tau over entries with m > 0.
double fit_log_slope(std::span<const double> tau, std::span<const double> m);

EstimateReport verify_moment_bound(const Scenario& s, const RunOptions& opts = {});
EstimateReport verify_truncation_convergence(const Scenario& s, const RunOptions& opts = {});
EstimateReport verify_interior_regularity(const Scenario& s, const RunOptions& opts = {});
EstimateReport verify_weighted_regularity(const Scenario& s, const RunOptions& opts = {});
/// Throws ConfigError for fewer than 3 lags, lags that are not multiples of
/// the snapshot stride, or lags that do not fit in [0, T].
EstimateReport estimate_holder_exponent(const Scenario& s, const RunOptions& opts = {});

/// Assumption checks on the configured coefficients and drift: parabolicity,
/// coefficient bounds, monotonicity/growth of f and discrete coercivity.
struct AssumptionSummary {
    bool pass = false;
    nlohmann::json details;
};
AssumptionSummary check_assumptions(const Scenario& s);

}  // namespace monospde
