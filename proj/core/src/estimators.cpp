#include "monospde/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "monospde/coefficients.hpp"
#include "monospde/counter_rng.hpp"
#include "monospde/errors.hpp"
#include "monospde/norms.hpp"
#include "monospde/parallel.hpp"

namespace monospde {

using nlohmann::json;

Statistic summarize(std::span<const double> values) {
    Statistic s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

bool EstimateReport::passed() const {
    return verdict == "pass" || verdict == "stable" || verdict == "bounded" || verdict == "degenerate";
}

namespace {

json statistic_json(const Statistic& s) { return json{{"mean", s.mean}, {"stderr", s.std_error}}; }

std::string csv_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string optional_csv(const json& details, const char* key) {
    auto it = details.find(key);
    if (it == details.end() || !it->is_number()) return "";
    return csv_number(it->get<double>());
}

}  // namespace

json to_json(const EstimateReport& r) {
    return json{{"estimate_id", r.estimate_id},
                {"lhs", statistic_json(r.lhs)},
                {"rhs", statistic_json(r.rhs)},
                {"n_emp", r.n_emp ? json(*r.n_emp) : json(nullptr)},
                {"samples", r.samples},
                {"config_hash", r.config_hash},
                {"verdict", r.verdict},
                {"warnings", r.warnings},
                {"details", r.details}};
}

std::string report_csv_header() {
    return "estimate_id,lhs_mean,lhs_stderr,rhs_mean,rhs_stderr,n_emp,samples,config_hash,verdict,"
           "refinement_ratio,gamma_fit,implied_order";
}

std::string report_csv_row(const EstimateReport& r) {
    std::ostringstream os;
    os << r.estimate_id << ',' << csv_number(r.lhs.mean) << ',' << csv_number(r.lhs.std_error) << ','
       << csv_number(r.rhs.mean) << ',' << csv_number(r.rhs.std_error) << ','
       << (r.n_emp ? csv_number(*r.n_emp) : std::string()) << ',' << r.samples << ',' << r.config_hash << ','
       << r.verdict << ',' << optional_csv(r.details, "refinement_ratio") << ','
       << optional_csv(r.details, "gamma_fit") << ',' << optional_csv(r.details, "implied_order");
    return os.str();
}

std::optional<double> empirical_constant(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return std::nullopt;
}

namespace {

double trapezoid(std::span<const double> times, std::span<const double> values) {
    double s = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) s += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
    return s;
}

std::vector<double> step_times(const SolverConfig& cfg) {
    const std::size_t n = cfg.steps();
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = i * cfg.dt;
    return t;
}

Field sample_scalar(const ScalarFn& f, const Grid& grid, double t) {
    Field out(grid.node_count());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = f(t, grid.coord(n));
    return out;
}

std::vector<Field> sample_modes(const ModeScalarFn& g, int modes, const Grid& grid, double t) {
    std::vector<Field> out(modes, Field(grid.node_count()));
    for (int k = 0; k < modes; ++k)
        for (std::size_t n = 0; n < grid.node_count(); ++n) out[k][n] = g(t, grid.coord(n), k);
    return out;
}

Field l2_magnitude(const std::vector<Field>& parts, std::size_t size) {
    Field out(size, 0.0);
    for (const Field& f : parts)
        for (std::size_t n = 0; n < size; ++n) out[n] += f[n] * f[n];
    for (double& v : out) v = std::sqrt(v);
    return out;
}

/// int_0^T value(t) dt, trapezoid over the solver steps, or T * value(0) for
/// time-independent data.
template <class Fn>
double time_integral(bool time_independent, const SolverConfig& cfg, Fn value) {
    if (time_independent) return cfg.final_time * value(0.0);
    const auto t = step_times(cfg);
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = value(t[i]);
    return trapezoid(t, v);
}

Field zero_boundary(Field u, const Grid& grid) {
    for (std::size_t n = 0; n < u.size(); ++n)
        if (grid.is_boundary(n)) u[n] = 0.0;
    return u;
}

}  // namespace

double moment_data_functional(const Problem& problem, const SolverConfig& cfg, double p) {
    const Grid& grid = problem.grid;
    const Field phi = zero_boundary(problem.initial, grid);
    double total = lp_norm_pow(phi, p, grid);
    const auto& fs = problem.forcing;
    total += time_integral(fs.time_independent, cfg, [&](double t) {
        const Field f0 = sample_scalar(fs.f0, grid, t);
        const Field g = l2_magnitude(sample_modes(fs.g, fs.modes, grid, t), grid.node_count());
        return lp_norm_pow(f0, p, grid) + lp_norm_pow(g, p, grid);
    });
    return total;
}

double moment_lhs(const Trajectory& traj, double p) {
    const auto& m = traj.moment(p);
    return m.sup_lp_pow + m.gradient_integral;
}

InteriorSample interior_sample(const Problem& problem, const SolverConfig& cfg, const Trajectory& traj,
                               const Subdomain& region) {
    const Grid& grid = problem.grid;
    const int d = grid.dim();
    const auto& fs = problem.forcing;
    const SemilinearTerm term = cfg.truncation ? truncate(problem.term, *cfg.truncation) : problem.term;
    const std::size_t nt = traj.snapshots.size();

    std::vector<double> sup_part(d, 0.0);
    std::vector<std::vector<double>> h1_part(d, std::vector<double>(nt));
    std::vector<double> data(nt);

    std::vector<Field> g_cached;
    if (fs.time_independent) g_cached = sample_modes(fs.g, fs.modes, grid, 0.0);
    double g_h1_cached = 0.0;
    for (const Field& gk : g_cached) g_h1_cached += h1_seminorm_sq(gk, grid);

    for (std::size_t s = 0; s < nt; ++s) {
        const Field& u = traj.snapshots[s];
        const double t = traj.times[s];
        std::vector<Field> grad(d);
        for (int i = 0; i < d; ++i) {
            grad[i] = axis_derivative(u, grid, i, 1);
            sup_part[i] = std::max(sup_part[i], sobolev_norm_sq(grad[i], grid, 0, region));
            h1_part[i][s] = sobolev_norm_sq(grad[i], grid, 1, region);
        }
        Field drift(grid.node_count());
        for (std::size_t n = 0; n < drift.size(); ++n) {
            const Point x = grid.coord(n);
            const Vec2 z{grad[0][n], d > 1 ? grad[1][n] : 0.0};
            drift[n] = term(t, x, u[n], z) + fs.f0(t, x);
        }
        double g_h1 = g_h1_cached;
        if (!fs.time_independent) {
            g_h1 = 0.0;
            for (const Field& gk : sample_modes(fs.g, fs.modes, grid, t)) g_h1 += h1_seminorm_sq(gk, grid);
        }
        data[s] = h1_seminorm_sq(u, grid) + lp_norm_pow(drift, 2.0, grid) + lp_norm_pow(u, 2.0, grid) + g_h1;
    }

    InteriorSample out;
    out.lhs.resize(d);
    for (int i = 0; i < d; ++i) out.lhs[i] = sup_part[i] + trapezoid(traj.times, h1_part[i]);
    out.rhs = h1_seminorm_sq(traj.initial, grid) + trapezoid(traj.times, data);
    return out;
}

namespace {

WeightedNormSpec lowered(const WeightedNormSpec& spec, int by) {
    return {std::max(0, spec.order - by), spec.q, spec.theta};
}

Field second_derivative(const Field& u, const Grid& grid, int i, int j) {
    MultiIndex g;
    (i == 0 ? g.x : g.y) += 1;
    (j == 0 ? g.x : g.y) += 1;
    return derivative(u, grid, g);
}

}  // namespace

WeightedSample weighted_sample(const Trajectory& traj, const Grid& grid, const DistanceField& dist,
                               const WeightedNormSpec& spec) {
    const int d = grid.dim();
    const std::size_t nt = traj.snapshots.size();
    std::vector<double> lhs(nt), first(nt, 0.0), second(nt, 0.0);
    for (std::size_t s = 0; s < nt; ++s) {
        const Field& u = traj.snapshots[s];
        lhs[s] = weighted_norm_pow(divide_by_weight(u, grid, dist), spec, grid, dist);
        if (spec.order >= 1)
            for (int i = 0; i < d; ++i)
                first[s] += weighted_norm_pow(axis_derivative(u, grid, i, 1), lowered(spec, 1), grid, dist);
        if (spec.order >= 2)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    second[s] += weighted_norm_pow(multiply_by_weight(second_derivative(u, grid, i, j), dist, 1.0),
                                                   lowered(spec, 2), grid, dist);
    }
    return {trapezoid(traj.times, lhs), trapezoid(traj.times, first), trapezoid(traj.times, second)};
}

double weighted_data_functional(const Problem& problem, const SolverConfig& cfg, const DistanceField& dist,
                                const WeightedNormSpec& spec) {
    const Grid& grid = problem.grid;
    const Field phi = zero_boundary(problem.initial, grid);
    double total = weighted_norm_pow(multiply_by_weight(phi, dist, 2.0 / spec.q - 1.0), spec, grid, dist);
    const auto& fs = problem.forcing;
    total += time_integral(fs.time_independent, cfg, [&](double t) {
        const auto g = sample_modes(fs.g, fs.modes, grid, t);
        return weighted_norm_pow(std::span<const Field>(g), lowered(spec, 1), grid, dist) +
               weighted_norm_pow(sample_scalar(fs.f0, grid, t), lowered(spec, 2), grid, dist);
    });
    return total;
}

double fit_log_slope(std::span<const double> tau, std::span<const double> m) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < tau.size() && i < m.size(); ++i) {
        if (!(m[i] > 0.0) || !(tau[i] > 0.0)) continue;
        const double x = std::log(tau[i]), y = std::log(m[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

namespace {

/// One Monte Carlo level of a refinement study.
struct Level {
    std::string label;
    Scenario scenario;
};

std::vector<Level> study_levels(const Scenario& s) {
    std::vector<Level> levels{{"base", s}};
    if (s.estimator.refinement_check) {
        levels.push_back({"dt_half", refined_in_time(s)});
        levels.push_back({"h_half", refined_in_space(s)});
    }
    return levels;
}

/// Runs `per_sample(problem, cfg, trajectory, index)` for every sample.
template <class Fn>
auto run_samples(const Scenario& s, const RunOptions& opts, Fn per_sample) {
    const Problem problem = build_problem(s);
    const SolverConfig cfg = build_solver_config(s);
    return parallel_map(static_cast<std::size_t>(s.samples), opts.workers, [&](std::size_t i) {
        const Trajectory traj = solve_trajectory(problem, build_noise(s, i), cfg);
        return per_sample(problem, cfg, traj, i);
    });
}

json level_json(const Level& level, const Statistic& lhs, const Statistic& rhs, std::optional<double> n_emp) {
    const SolverConfig cfg = build_solver_config(level.scenario);
    return json{{"label", level.label},
                {"dt", cfg.dt},
                {"points", level.scenario.domain.points},
                {"lhs", statistic_json(lhs)},
                {"rhs", statistic_json(rhs)},
                {"n_emp", n_emp ? json(*n_emp) : json(nullptr)}};
}

/// Shared verdict rule for ratio estimates across refinement levels.
/// `lhs` and `rhs` hold the level means.
std::string ratio_verdict(const std::vector<double>& lhs, const std::vector<double>& rhs, double factor,
                          bool refinement, double& ratio) {
    ratio = std::numeric_limits<double>::quiet_NaN();
    bool all_zero = true;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (rhs[i] == 0.0 && lhs[i] > 0.0) return "violation";
        if (lhs[i] != 0.0 || rhs[i] != 0.0) all_zero = false;
    }
    if (all_zero) return "pass";
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (rhs[i] == 0.0) continue;
        const double n = lhs[i] / rhs[i];
        if (!std::isfinite(n)) return "unstable";
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    if (!refinement) return "pass";
    ratio = lo > 0.0 ? hi / lo : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    return ratio < factor ? "stable" : "unstable";
}

EstimateReport new_report(const Scenario& s, const char* id) {
    EstimateReport r;
    r.estimate_id = id;
    r.samples = s.samples;
    r.config_hash = config_fingerprint(s);
    return r;
}

void set_ratio(EstimateReport& r, double ratio) {
    r.details["refinement_ratio"] = std::isfinite(ratio) ? json(ratio) : json(nullptr);
}

}  // namespace

EstimateReport verify_moment_bound(const Scenario& s, const RunOptions& opts) {
    EstimateReport report = new_report(s, "moment_bound");
    const double p = s.estimator.p;
    const double alpha = s.semilinear.preset == "ginzburg_landau" ? s.semilinear.alpha : 1.0;
    if (p < std::max(alpha, 2.0)) report.warnings.push_back("p below max(alpha, 2)");

    std::vector<double> lhs_means, rhs_means;
    json levels = json::array();
    for (const Level& level : study_levels(s)) {
        const auto lhs = run_samples(level.scenario, opts, [p](const Problem&, const SolverConfig&,
                                                               const Trajectory& traj, std::size_t) {
            return moment_lhs(traj, p);
        });
        const Problem problem = build_problem(level.scenario);
        const double data = moment_data_functional(problem, build_solver_config(level.scenario), p);
        const std::vector<double> rhs(lhs.size(), data);
        const Statistic l = summarize(lhs), r = summarize(rhs);
        levels.push_back(level_json(level, l, r, empirical_constant(l.mean, r.mean)));
        lhs_means.push_back(l.mean);
        rhs_means.push_back(r.mean);
        if (level.label == "base") {
            report.lhs = l;
            report.rhs = r;
            report.n_emp = empirical_constant(l.mean, r.mean);
        }
    }
    double ratio;
    report.verdict = ratio_verdict(lhs_means, rhs_means, s.estimator.stability_factor,
                                   s.estimator.refinement_check, ratio);
    report.details["p"] = p;
    report.details["levels"] = levels;
    set_ratio(report, ratio);
    return report;
}

EstimateReport verify_truncation_convergence(const Scenario& s, const RunOptions& opts) {
    EstimateReport report = new_report(s, "truncation_convergence");
    const double p = s.estimator.p;
    const Problem problem = build_problem(s);
    const SolverConfig cfg = build_solver_config(s);
    const Grid& grid = problem.grid;

    // Level 0 is the reference: the configured drift without extra truncation.
    std::vector<double> levels{std::numeric_limits<double>::infinity()};
    for (double m : s.estimator.m_list) levels.push_back(m);

    struct PerSample {
        std::vector<double> lhs, gap;
        std::vector<char> identical;
    };
    const auto samples = parallel_map(static_cast<std::size_t>(s.samples), opts.workers, [&](std::size_t i) {
        const auto family = solve_truncated_family(problem, levels, build_noise(s, i), cfg);
        PerSample out;
        const Trajectory& ref = family.front();
        for (const Trajectory& tr : family) {
            out.lhs.push_back(moment_lhs(tr, p));
            double gap = 0.0;
            for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
                Field diff = tr.snapshots[k];
                for (std::size_t n = 0; n < diff.size(); ++n) diff[n] -= ref.snapshots[k][n];
                gap = std::max(gap, lp_norm(diff, 2.0, grid));
            }
            out.gap.push_back(gap);
            out.identical.push_back(tr.snapshots == ref.snapshots);
        }
        return out;
    });

    const double data = moment_data_functional(problem, cfg, p);
    const std::vector<double> rhs(samples.size(), data);
    const Statistic rhs_stat = summarize(rhs);
    const double alpha = problem.term.alpha();
    json rows = json::array();
    std::optional<double> reference_n;
    double worst_n = 0.0;
    bool violation = false;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        std::vector<double> lhs, gap;
        bool identical = true;
        for (const auto& ps : samples) {
            lhs.push_back(ps.lhs[l]);
            gap.push_back(ps.gap[l]);
            identical = identical && ps.identical[l];
        }
        const Statistic ls = summarize(lhs);
        const auto n = empirical_constant(ls.mean, rhs_stat.mean);
        if (!n && ls.mean > 0.0) violation = true;
        const double m = levels[l];
        json row{{"m", std::isfinite(m) ? json(m) : json(nullptr)},
                 {"lhs", statistic_json(ls)},
                 {"n_emp", n ? json(*n) : json(nullptr)},
                 {"gap_mean", summarize(gap).mean},
                 {"gap_max", *std::max_element(gap.begin(), gap.end())},
                 {"identical_to_reference", identical},
                 {"c_m", std::isfinite(m) ? json(cfg.final_time * std::pow(1.0 + m, alpha * (p - 1.0))) : json(nullptr)}};
        rows.push_back(row);
        if (l == 0) {
            report.lhs = ls;
            reference_n = n;
        } else if (n) {
            worst_n = std::max(worst_n, *n);
        }
    }
    report.rhs = rhs_stat;
    report.n_emp = reference_n;
    report.details["p"] = p;
    report.details["reference_truncation"] = cfg.truncation ? json(*cfg.truncation) : json(nullptr);
    report.details["levels"] = rows;
    const double factor = s.estimator.stability_factor;
    if (violation)
        report.verdict = "violation";
    else if (!reference_n)
        report.verdict = "pass";
    else
        report.verdict = worst_n <= factor * *reference_n ? "bounded" : "unbounded";
    if (reference_n && *reference_n > 0.0) report.details["max_ratio_to_reference"] = worst_n / *reference_n;
    return report;
}

EstimateReport verify_interior_regularity(const Scenario& s, const RunOptions& opts) {
    EstimateReport report = new_report(s, "interior_regularity");
    if (s.coefficients.derivative_order < 1)
        report.warnings.push_back("coefficient derivative bounds of order 1 are not declared");
    const int d = static_cast<int>(s.domain.extents.size());

    std::vector<std::vector<double>> lhs_means(d), rhs_means(d);
    json levels = json::array();
    for (const Level& level : study_levels(s)) {
        const Grid grid = build_grid(DomainSpec{level.scenario.domain.extents, level.scenario.domain.points});
        const Subdomain region = carve_subdomain(grid, s.estimator.margin);
        const auto per = run_samples(level.scenario, opts,
                                     [&](const Problem& problem, const SolverConfig& cfg, const Trajectory& traj,
                                         std::size_t) { return interior_sample(problem, cfg, traj, region); });
        std::vector<double> rhs;
        for (const auto& p : per) rhs.push_back(p.rhs);
        const Statistic r = summarize(rhs);
        json axes = json::array();
        for (int i = 0; i < d; ++i) {
            std::vector<double> lhs;
            for (const auto& p : per) lhs.push_back(p.lhs[i]);
            const Statistic l = summarize(lhs);
            lhs_means[i].push_back(l.mean);
            rhs_means[i].push_back(r.mean);
            const auto n = empirical_constant(l.mean, r.mean);
            axes.push_back(json{{"axis", i}, {"lhs", statistic_json(l)}, {"n_emp", n ? json(*n) : json(nullptr)}});
            if (level.label == "base") {
                // Headline numbers: the axis with the largest LHS.
                if (i == 0 || l.mean > report.lhs.mean) {
                    report.lhs = l;
                    report.n_emp = n;
                }
                report.rhs = r;
            }
        }
        json lj = level_json(level, Statistic{}, r, std::nullopt);
        lj.erase("lhs");
        lj.erase("n_emp");
        lj["axes"] = axes;
        lj["subdomain_nodes"] = region.size();
        levels.push_back(lj);
    }

    std::string verdict = "pass";
    double worst_ratio = std::numeric_limits<double>::quiet_NaN();
    json axis_verdicts = json::array();
    for (int i = 0; i < d; ++i) {
        double ratio;
        const std::string v =
            ratio_verdict(lhs_means[i], rhs_means[i], s.estimator.stability_factor, s.estimator.refinement_check, ratio);
        axis_verdicts.push_back(json{{"axis", i}, {"verdict", v}, {"refinement_ratio", std::isfinite(ratio) ? json(ratio) : json(nullptr)}});
        if (std::isfinite(ratio) && !(worst_ratio >= ratio)) worst_ratio = ratio;
        if (v == "violation" || (v == "unstable" && verdict != "violation") || (v == "stable" && verdict == "pass"))
            verdict = v;
    }
    report.verdict = verdict;
    report.details["margin"] = s.estimator.margin;
    report.details["levels"] = levels;
    report.details["axes"] = axis_verdicts;
    set_ratio(report, worst_ratio);
    return report;
}

EstimateReport verify_weighted_regularity(const Scenario& s, const RunOptions& opts) {
    EstimateReport report = new_report(s, "weighted_regularity");
    const int d = static_cast<int>(s.domain.extents.size());
    const WeightedNormSpec spec{s.estimator.order, s.estimator.q, s.estimator.theta_or_default(d)};
    if (!theta_in_window(d, spec.q, spec.theta)) report.warnings.push_back("theta outside the admissible window");
    const double alpha = s.semilinear.preset == "ginzburg_landau" ? s.semilinear.alpha : 1.0;
    if (s.estimator.p < std::max(spec.q * alpha - spec.q, 2.0))
        report.warnings.push_back("p below max(q alpha - q, 2)");

    std::vector<double> lhs_means, rhs_means;
    json levels = json::array();
    for (const Level& level : study_levels(s)) {
        const Grid grid = build_grid(DomainSpec{level.scenario.domain.extents, level.scenario.domain.points});
        const DistanceField dist = boundary_distance(grid);
        const auto per = run_samples(level.scenario, opts,
                                     [&](const Problem&, const SolverConfig&, const Trajectory& traj, std::size_t) {
                                         return weighted_sample(traj, grid, dist, spec);
                                     });
        const Problem problem = build_problem(level.scenario);
        const double data = weighted_data_functional(problem, build_solver_config(level.scenario), dist, spec);
        std::vector<double> lhs, first, second;
        for (const auto& p : per) {
            lhs.push_back(p.lhs);
            first.push_back(p.first);
            second.push_back(p.second);
        }
        const std::vector<double> rhs(lhs.size(), data);
        const Statistic l = summarize(lhs), r = summarize(rhs);
        json lj = level_json(level, l, r, empirical_constant(l.mean, r.mean));
        lj["first_derivative_piece"] = statistic_json(summarize(first));
        lj["second_derivative_piece"] = statistic_json(summarize(second));
        levels.push_back(lj);
        lhs_means.push_back(l.mean);
        rhs_means.push_back(r.mean);
        if (level.label == "base") {
            report.lhs = l;
            report.rhs = r;
            report.n_emp = empirical_constant(l.mean, r.mean);
        }
    }
    double ratio;
    report.verdict =
        ratio_verdict(lhs_means, rhs_means, s.estimator.stability_factor, s.estimator.refinement_check, ratio);
    if (report.verdict != "violation" && !std::isfinite(report.lhs.mean)) report.verdict = "unstable";
    report.details["order"] = spec.order;
    report.details["q"] = spec.q;
    report.details["theta"] = spec.theta;
    report.details["comparability"] = boundary_distance(build_problem(s).grid).comparability;
    report.details["levels"] = levels;
    set_ratio(report, ratio);
    return report;
}

EstimateReport estimate_holder_exponent(const Scenario& s, const RunOptions& opts) {
    const auto& e = s.estimator;
    if (e.lags.size() < 3) throw ConfigError("Hoelder fit needs at least 3 lags");
    const SolverConfig cfg = build_solver_config(s);
    const std::size_t steps = cfg.steps();
    const int stride = cfg.snapshot_stride;
    if (steps % static_cast<std::size_t>(stride) != 0)
        throw ConfigError("Hoelder fit needs the step count to be a multiple of the snapshot stride");
    const std::size_t nsnap = steps / stride + 1;
    std::vector<std::size_t> lag_snaps;
    for (int lag : e.lags) {
        if (lag % stride != 0) throw ConfigError("Hoelder lags must be multiples of the snapshot stride");
        if (static_cast<std::size_t>(lag) >= steps) throw ConfigError("Hoelder lag exceeds the time horizon");
        lag_snaps.push_back(static_cast<std::size_t>(lag / stride));
    }

    EstimateReport report = new_report(s, "holder_exponent");
    const int d = static_cast<int>(s.domain.extents.size());
    const double q = e.q;
    const double theta = e.theta_or_default(d);
    if (!theta_in_window(d, q, theta)) report.warnings.push_back("theta outside the admissible window");
    if (q <= 4.0) report.warnings.push_back("q <= 4 gives no positive Hoelder order");

    const Grid grid = build_grid(DomainSpec{s.domain.extents, s.domain.points});
    const DistanceField dist = boundary_distance(grid);
    const WeightedNormSpec increment_spec{0, q, theta + q};

    // per-sample mean over pairs, one entry per lag
    const auto per = run_samples(s, opts, [&](const Problem&, const SolverConfig&, const Trajectory& traj,
                                               std::size_t sample) {
        std::vector<double> out(lag_snaps.size(), 0.0);
        for (std::size_t l = 0; l < lag_snaps.size(); ++l) {
            const std::size_t span = nsnap - lag_snaps[l];
            double sum = 0.0;
            for (int pair = 0; pair < e.pairs; ++pair) {
                const double u = counter_rng::uniform(counter_rng::hash({s.seed, sample, 0x401d, l, std::uint64_t(pair)}));
                const std::size_t a = std::min(span - 1, static_cast<std::size_t>((1.0 - u) * span));
                Field diff = traj.snapshots[a + lag_snaps[l]];
                for (std::size_t n = 0; n < diff.size(); ++n) diff[n] -= traj.snapshots[a][n];
                sum += weighted_norm_pow(diff, increment_spec, grid, dist);
            }
            out[l] = sum / e.pairs;
        }
        return out;
    });

    std::vector<double> tau, moments, moment_err;
    for (std::size_t l = 0; l < lag_snaps.size(); ++l) {
        std::vector<double> col;
        for (const auto& v : per) col.push_back(v[l]);
        const Statistic st = summarize(col);
        tau.push_back(e.lags[l] * cfg.dt);
        moments.push_back(st.mean);
        moment_err.push_back(st.std_error);
    }
    const double threshold = q / 2.0 - 1.0 - e.holder_tolerance;
    report.rhs = {q / 2.0 - 1.0, 0.0};
    report.details["tau"] = tau;
    report.details["moment"] = moments;
    report.details["moment_stderr"] = moment_err;
    report.details["q"] = q;
    report.details["theta"] = theta;
    report.details["threshold"] = threshold;
    report.details["theory_order"] = 0.5 - 2.0 / q;

    const bool degenerate = std::all_of(moments.begin(), moments.end(), [](double m) { return m == 0.0; });
    if (degenerate) {
        report.verdict = "degenerate";
        report.warnings.push_back("all increment moments vanish");
        report.details["gamma_fit"] = nullptr;
        report.details["implied_order"] = nullptr;
        return report;
    }
    const double gamma = fit_log_slope(tau, moments);

    // Delete-one jackknife over samples for the slope's standard error.
    double jack_err = 0.0;
    const std::size_t n = per.size();
    if (n > 1) {
        std::vector<double> totals(lag_snaps.size(), 0.0);
        for (const auto& v : per)
            for (std::size_t l = 0; l < v.size(); ++l) totals[l] += v[l];
        std::vector<double> slopes;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> m(lag_snaps.size());
            for (std::size_t l = 0; l < m.size(); ++l) m[l] = (totals[l] - per[i][l]) / (n - 1);
            slopes.push_back(fit_log_slope(tau, m));
        }
        const double mean = summarize(slopes).mean;
        double ss = 0.0;
        for (double v : slopes) ss += (v - mean) * (v - mean);
        jack_err = std::sqrt((n - 1.0) / n * ss);
    }
    report.lhs = {gamma, jack_err};
    report.details["gamma_fit"] = gamma;
    report.details["implied_order"] = (gamma - 1.0) / q;
    report.verdict = std::isfinite(gamma) && gamma >= threshold ? "pass" : "fail";
    return report;
}

AssumptionSummary check_assumptions(const Scenario& s) {
    const Problem problem = build_problem(s);
    const Grid& grid = problem.grid;
    const double T = s.solver.final_time;
    const double times[] = {0.0, 0.5 * T, T};
    AssumptionSummary out;

    const double margin = check_parabolicity(problem.coeffs, grid, times);
    const bool parabolic = margin >= s.coefficients.ellipticity - 1e-12;

    const int order = std::min(problem.coeffs.derivative_order, 3);
    const BoundednessReport bounds = check_boundedness(problem.coeffs, grid, order, times);

    SamplingBox box;
    box.dim = grid.dim();
    box.t_max = T;
    box.x_extent = {grid.extent(0), grid.dim() > 1 ? grid.extent(1) : 1.0};
    const AssumptionReport f = check_assumption_f(problem.term, s.estimator.assumption_samples, s.seed, box);

    const CoercivityReport coercive =
        check_discrete_coercivity(problem.coeffs, grid, s.estimator.coercivity_trials, s.seed);
    const bool coercivity_ok = coercive.kappa_observed > 0.0;

    out.pass = parabolic && bounds.pass && f.pass() && coercivity_ok;
    out.details = json{
        {"config_hash", config_fingerprint(s)},
        {"pass", out.pass},
        {"parabolicity", {{"margin", margin}, {"kappa", s.coefficients.ellipticity}, {"pass", parabolic}}},
        {"boundedness",
         {{"order", order},
          {"level", bounds.level},
          {"derivatives", bounds.derivatives},
          {"worst", bounds.worst},
          {"K", problem.coeffs.bound},
          {"pass", bounds.pass}}},
        {"semilinear",
         {{"name", problem.term.name()},
          {"K", problem.term.bound()},
          {"alpha", problem.term.alpha()},
          {"samples", f.samples},
          {"monotonicity_excess", f.monotonicity},
          {"lipschitz_excess", f.lipschitz},
          {"growth_excess", f.growth},
          {"derivative_growth_excess", f.derivative_growth},
          {"monotonicity_violations", f.monotonicity_violations},
          {"lipschitz_violations", f.lipschitz_violations},
          {"growth_violations", f.growth_violations},
          {"pass", f.pass()}}},
        {"coercivity",
         {{"kappa_observed", coercive.kappa_observed},
          {"k_prime_observed", coercive.k_prime_observed},
          {"kappa_reference", coercive.kappa_reference},
          {"trials", coercive.trials},
          {"pass", coercivity_ok}}},
    };
    return out;
}

}  // namespace monospde
