#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "monospde/noise.hpp"
#include "monospde/solver.hpp"

namespace monospde {

/// Version string folded into every config fingerprint.
std::string code_version();

struct DomainConfig {
    std::vector<double> extents{1.0};
    std::vector<int> points{64};
};

/// Coefficient preset: "constant", "smooth_varying", "anisotropic" or "sampled".
struct CoefficientConfig {
    std::string preset = "constant";
    double a = 1.0;
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;  // anisotropic
    std::vector<double> b{0.0};
    double c = 0.0;
    double sigma = 0.0;
    double mu = 0.0;
    std::string a_csv;  // sampled: isotropic a(t, x)
    std::string c_csv;  // sampled: c(t, x)
    double bound = 4.0;       // K
    double ellipticity = 0.5; // kappa
    int derivative_order = 2;
};

/// Semilinear preset: "ginzburg_landau", "zero" or "lipschitz_tanh".
struct SemilinearConfig {
    std::string preset = "ginzburg_landau";
    double alpha = 4.0;
    double scale = 1.0;
    std::optional<double> bound;  // overrides the preset's K
};

/// Preset for f^0, g or the initial condition.
///   initial: zero | sine | bump
///   f0:      zero | constant | sine
///   g:       zero | constant | sine_modes
struct FieldPreset {
    std::string preset = "zero";
    double amplitude = 0.0;
};

struct SolverSection {
    double final_time = 0.25;
    double dt = 1e-3;  // step of the sampled noise
    int refine = 1;    // bridge refinement factor: the solver steps dt / refine
    std::string scheme = "semi-implicit";
    std::optional<double> truncation = 1e4;
    int snapshot_stride = 1;
    double tolerance = 1e-10;
    int max_iterations = 10000;
};

struct EstimatorSection {
    double p = 4.0;
    double q = 8.0;
    std::optional<double> theta;  // default: middle of the admissible window
    int order = 2;                // weighted Sobolev order for verify-weighted
    double margin = 0.25;
    std::vector<int> lags{2, 4, 8, 16, 32};  // in solver steps
    int pairs = 64;
    std::vector<double> m_list{1.0, 2.0, 4.0, 8.0};
    bool refinement_check = true;
    double stability_factor = 2.0;
    double holder_tolerance = 0.25;
    int coercivity_trials = 100;
    long assumption_samples = 100000;

    double theta_or_default(int dim) const { return theta ? *theta : dim - 1.5 + q; }
};

struct OutputSection {
    std::string trajectory_dump = "none";  // none | csv | binary
    int dump_count = 1;
};

struct Scenario {
    DomainConfig domain;
    CoefficientConfig coefficients;
    SemilinearConfig semilinear;
    FieldPreset f0;
    FieldPreset g;
    FieldPreset initial{"sine", 1.0};
    int modes = 0;
    SolverSection solver;
    EstimatorSection estimator;
    OutputSection output;
    std::uint64_t seed = 1;
    int samples = 16;

    /// Checks every module precondition that can be checked without solving.
    /// Throws ConfigError.
    void validate() const;
};

/// Strict parse: unknown keys, wrong types and invalid values raise
/// ConfigError naming the offending keys. Missing keys take defaults.
Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::string& path);

/// Complete canonical form: every key present, object keys sorted.
nlohmann::json to_json(const Scenario& s);

/// Sets a dotted key (e.g. "solver.dt") in a config document. The value is
/// parsed as JSON when possible, otherwise kept as a string.
void apply_override(nlohmann::json& config, const std::string& dotted_key, const std::string& value);

/// 16 hex digits of FNV-1a over the canonical config and code version.
std::string config_fingerprint(const Scenario& s);

Problem build_problem(const Scenario& s);
SolverConfig build_solver_config(const Scenario& s);

/// Noise for one trajectory: sampled at solver.dt, bridge-refined by solver.refine.
std::shared_ptr<const NoisePath> build_noise(const Scenario& s, std::uint64_t stream);

/// Same scenario with twice the intervals per axis / half the solver step
/// (bridge-coupled to the same coarse noise).
Scenario refined_in_space(const Scenario& s);
Scenario refined_in_time(const Scenario& s);

}  // namespace monospde
