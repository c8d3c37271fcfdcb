#include "monospde/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "monospde/counter_rng.hpp"

namespace monospde {

SemilinearTerm::SemilinearTerm(Evaluator f, double bound, double alpha, std::string name, bool uses_gradient)
    : f_(std::move(f)), bound_(bound), alpha_(alpha), name_(std::move(name)), uses_gradient_(uses_gradient) {
    if (!f_) throw std::invalid_argument("semilinear term needs an evaluator");
    if (!(alpha_ >= 1.0)) throw std::invalid_argument("growth exponent alpha must be >= 1");
    if (!(bound_ >= 0.0)) throw std::invalid_argument("constant K must be non-negative");
}

double SemilinearTerm::truncated_sup_bound() const {
    if (!truncation_) return std::numeric_limits<double>::infinity();
    return bound_ * std::pow(1.0 + *truncation_, alpha_ - 1.0);
}

SemilinearTerm ginzburg_landau(double alpha) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("ginzburg_landau needs alpha >= 1");
    SemilinearTerm::Evaluator f;
    if (alpha == 4.0)
        f = [](double, Point, double r, Vec2) { return -r * r * r; };
    else if (alpha == 2.0)
        f = [](double, Point, double r, Vec2) { return -r; };
    else
        f = [alpha](double, Point, double r, Vec2) {
            if (r == 0.0) return 0.0;
            return -std::pow(std::abs(r), alpha - 2.0) * r;
        };
    return SemilinearTerm(std::move(f), 1.0, alpha, "ginzburg_landau");
}

SemilinearTerm zero_term() {
    return SemilinearTerm([](double, Point, double, Vec2) { return 0.0; }, 0.0, 1.0, "zero");
}

SemilinearTerm lipschitz_tanh(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("lipschitz_tanh needs a positive scale");
    return SemilinearTerm([scale](double, Point, double r, Vec2) { return -std::tanh(scale * r); },
                          std::max(1.0, scale), 1.0, "lipschitz_tanh");
}

SemilinearTerm truncate(const SemilinearTerm& term, double level) {
    if (!(level >= 0.0)) throw std::invalid_argument("truncation level must be non-negative");
    SemilinearTerm out = term;
    out.truncation_ = term.truncation_ ? std::min(*term.truncation_, level) : level;
    return out;
}

DecreasingForm normalize_decreasing(const SemilinearTerm& term, ScalarFn c) {
    const double k = term.bound();
    SemilinearTerm shifted(
        [term, k](double t, Point x, double r, Vec2 z) { return term(t, x, r, z) - k * r; },
        k, term.alpha(), term.name() + "-decreasing", term.uses_gradient());
    ScalarFn c_bar = [c = std::move(c), k](double t, Point x) { return c(t, x) + k; };
    return {std::move(shifted), std::move(c_bar)};
}

ZeroAtOriginForm normalize_zero_at_origin(const SemilinearTerm& term, ScalarFn f0) {
    SemilinearTerm shifted(
        [term](double t, Point x, double r, Vec2 z) { return term(t, x, r, z) - term(t, x, 0.0, Vec2{0.0, 0.0}); },
        term.bound(), term.alpha(), term.name() + "-centered", term.uses_gradient());
    ScalarFn f0_tilde = [term, f0 = std::move(f0)](double t, Point x) {
        return f0(t, x) + term(t, x, 0.0, Vec2{0.0, 0.0});
    };
    return {std::move(shifted), std::move(f0_tilde)};
}

AssumptionReport check_assumption_f(const SemilinearTerm& term, long sample_budget, std::uint64_t seed,
                                    const SamplingBox& box) {
    AssumptionReport rep;
    rep.monotonicity = rep.lipschitz = rep.growth = rep.derivative_growth = -std::numeric_limits<double>::infinity();
    const double k = term.bound();
    const double fd_step = 1e-4;
    // Violations are counted beyond a small relative slack for rounding.
    auto exceeds = [k](double excess, double scale) { return excess > 1e-9 * std::max({1.0, k, scale}); };

    std::uint64_t counter = 0;
    auto draw = [&](double lo, double hi) {
        return lo + (hi - lo) * counter_rng::uniform(counter_rng::hash({seed, 0xf00dULL, counter++}));
    };
    for (long s = 0; s < sample_budget; ++s) {
        const double t = draw(0.0, box.t_max);
        Point x{draw(0.0, box.x_extent[0]), box.dim == 2 ? draw(0.0, box.x_extent[1]) : 0.0};
        const double r = draw(-box.r_max, box.r_max);
        const double r2 = draw(-box.r_max, box.r_max);
        Vec2 z{draw(-box.z_max, box.z_max), box.dim == 2 ? draw(-box.z_max, box.z_max) : 0.0};
        Vec2 z2{draw(-box.z_max, box.z_max), box.dim == 2 ? draw(-box.z_max, box.z_max) : 0.0};

        const double fr = term(t, x, r, z);
        if (r != r2) {
            const double q = (r - r2) * (fr - term(t, x, r2, z)) / ((r - r2) * (r - r2));
            rep.monotonicity = std::max(rep.monotonicity, q - k);
            if (exceeds(q - k, std::abs(q))) ++rep.monotonicity_violations;
        }
        const double dz = std::hypot(z[0] - z2[0], z[1] - z2[1]);
        if (dz > 0.0) {
            const double q = std::abs(fr - term(t, x, r, z2)) / dz;
            rep.lipschitz = std::max(rep.lipschitz, q - k);
            if (exceeds(q - k, q)) ++rep.lipschitz_violations;
        }
        const double g = std::abs(fr) / std::pow(1.0 + std::abs(r), term.alpha() - 1.0);
        rep.growth = std::max(rep.growth, g - k);
        if (exceeds(g - k, g)) ++rep.growth_violations;

        const double dr = (term(t, x, r + fd_step, z) - term(t, x, r - fd_step, z)) / (2.0 * fd_step);
        rep.derivative_growth =
            std::max(rep.derivative_growth, std::abs(dr) / std::pow(1.0 + std::abs(r), term.alpha() - 2.0) - k);
        ++rep.samples;
    }
    return rep;
}

}  // namespace monospde
