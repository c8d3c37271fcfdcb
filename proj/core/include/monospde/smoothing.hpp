#pragma once

#include <span>
#include <vector>

namespace monospde {

/// C^2 approximation of r -> |r|^p: the power itself for |r| < n and its
/// second-order Taylor polynomial at |r| = n beyond.
struct SmoothPower {
    double p = 2.0;  // >= 2
    int n = 1;       // >= 1

    /// Throws std::invalid_argument for p < 2 or n < 1.
    SmoothPower(double p, int n);

    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;
};

/// Largest relative excess LHS/RHS - 1 for the four inequalities
///   (a) |r phi'| <= p phi
///   (b) |r^2 phi''| <= p (p-1) phi
///   (c) |phi'|^2 <= 4 p phi'' phi
///   (d) |phi''|^{p/(p-2)} <= [p (p-1)]^{p/(p-2)} phi   (skipped for p == 2)
/// Zero when every sample satisfies all of them.
struct PhiInequalityReport {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    long violations = 0;
    double max_violation() const;
};

PhiInequalityReport check_phi_inequalities(const SmoothPower& s, std::span<const double> r_samples,
                                           double rel_tol = 1e-10);

struct PhiLimitRow {
    int n = 0;
    double value = 0.0, d1 = 0.0, d2 = 0.0;
    double target_value = 0.0, target_d1 = 0.0, target_d2 = 0.0;
    bool exact = false;  // all three agree exactly
};

/// Tabulates phi_n(r), phi_n'(r), phi_n''(r) against |r|^p, p|r|^{p-2} r and
/// p(p-1)|r|^{p-2} for each n.
std::vector<PhiLimitRow> check_phi_limits(double p, double r, std::span<const int> n_sequence);

/// max over samples and n of phi_n(r) / |r|^p (r != 0).
double fit_growth_constant(double p, std::span<const int> n_values, std::span<const double> r_samples);

}  // namespace monospde
