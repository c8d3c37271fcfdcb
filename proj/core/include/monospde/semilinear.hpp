#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "monospde/coefficients.hpp"
#include "monospde/types.hpp"

namespace monospde {

/// Semilinear drift f_t(x, r, z) with one-sided monotonicity constant K,
/// growth exponent alpha and optional truncation level m.
class SemilinearTerm {
public:
    using Evaluator = std::function<double(double t, Point x, double r, Vec2 z)>;

    /// Throws std::invalid_argument for alpha < 1 or a missing evaluator.
    SemilinearTerm(Evaluator f, double bound, double alpha, std::string name, bool uses_gradient = false);

    /// f^m(t, x, r, z) = f(t, x, clamp(r, -m, m), z) when truncated.
    double operator()(double t, Point x, double r, Vec2 z) const {
        if (truncation_) r = r < -*truncation_ ? -*truncation_ : (r > *truncation_ ? *truncation_ : r);
        return f_(t, x, r, z);
    }
    double untruncated(double t, Point x, double r, Vec2 z) const { return f_(t, x, r, z); }

    double bound() const { return bound_; }
    double alpha() const { return alpha_; }
    const std::string& name() const { return name_; }
    bool uses_gradient() const { return uses_gradient_; }
    std::optional<double> truncation() const { return truncation_; }

    /// K (1 + m)^{alpha - 1}; infinite when untruncated.
    double truncated_sup_bound() const;

private:
    friend SemilinearTerm truncate(const SemilinearTerm& term, double level);

    Evaluator f_;
    double bound_;
    double alpha_;
    std::string name_;
    bool uses_gradient_;
    std::optional<double> truncation_;
};

/// f(r) = -|r|^{alpha-2} r, K = 1. Throws std::invalid_argument for alpha < 1.
SemilinearTerm ginzburg_landau(double alpha);
SemilinearTerm zero_term();
/// f(r) = -tanh(scale r); alpha = 1, K = max(1, scale).
SemilinearTerm lipschitz_tanh(double scale);

/// Clamp the r-argument to [-m, m]. Truncating twice keeps the smaller level.
/// Throws std::invalid_argument for m < 0 (m = 0 freezes r at 0).
SemilinearTerm truncate(const SemilinearTerm& term, double level);

/// f - K r (decreasing in r) paired with c + K.
struct DecreasingForm {
    SemilinearTerm term;
    ScalarFn c;
};
DecreasingForm normalize_decreasing(const SemilinearTerm& term, ScalarFn c);

/// f - f(t, x, 0, 0) paired with f^0 + f(t, x, 0, 0).
struct ZeroAtOriginForm {
    SemilinearTerm term;
    ScalarFn f0;
};
ZeroAtOriginForm normalize_zero_at_origin(const SemilinearTerm& term, ScalarFn f0);

/// Box sampled by check_assumption_f.
struct SamplingBox {
    double r_max = 10.0;
    double z_max = 10.0;
    double t_max = 1.0;
    Vec2 x_extent{1.0, 1.0};
    int dim = 1;
};

/// Largest observed excess over the declared constants; positive means violated.
///   monotonicity: (r - r')(f(r) - f(r')) / |r - r'|^2 - K
///   lipschitz:    |f(z) - f(z')| / |z - z'| - K
///   growth:       |f(r)| / (1 + |r|)^{alpha - 1} - K
///   derivative:   |d_r f| / (1 + |r|)^{alpha - 2} - K   (informational)
struct AssumptionReport {
    double monotonicity = 0.0;
    double lipschitz = 0.0;
    double growth = 0.0;
    double derivative_growth = 0.0;
    long monotonicity_violations = 0;
    long lipschitz_violations = 0;
    long growth_violations = 0;
    long samples = 0;
    bool pass() const { return monotonicity_violations == 0 && lipschitz_violations == 0 && growth_violations == 0; }
};

AssumptionReport check_assumption_f(const SemilinearTerm& term, long sample_budget, std::uint64_t seed,
                                    const SamplingBox& box = {});

}  // namespace monospde
