#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monospde {

/// Malformed or inconsistent scenario configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-finite data, blow-up, or a linear solve that
/// did not converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BlowUpError : public NumericalError {
public:
    BlowUpError(std::size_t step, double t, double sup_norm)
        : NumericalError("state blew up at step " + std::to_string(step) + " (t=" + std::to_string(t) +
                         ", sup|u|=" + std::to_string(sup_norm) + ")"),
          step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

class LinearSolveError : public NumericalError {
public:
    LinearSolveError(std::size_t iterations, double residual)
        : NumericalError("linear solve did not converge after " + std::to_string(iterations) +
                         " iterations (relative residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

}  // namespace monospde
