#include "monospde_cli/runner.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "monospde/errors.hpp"
#include "monospde/estimators.hpp"
#include "monospde/norms.hpp"
#include "monospde/parallel.hpp"
#include "monospde/scenario.hpp"
#include "monospde/solver.hpp"

namespace monospde::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::string out = "out";
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    bool strict_fp = false;
    std::vector<std::string> overrides;  // key=value
    // sweep
    std::string subcommand;
    std::string axis;
    std::vector<std::string> values;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "Scenario JSON file")->required();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--workers", o.workers, "Parallel trajectory workers")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Override the scenario seed");
    cmd->add_option("--samples", o.samples, "Override the sample count")->check(CLI::PositiveNumber);
    cmd->add_flag("--strict-fp", o.strict_fp, "Sequential, bitwise-reproducible execution");
    cmd->add_option("--set", o.overrides, "Override a config key: dotted.key=value");
}

json read_config(const Options& o) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("cannot open config file '" + o.config + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in '" + o.config + "': " + e.what());
    }
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_override(doc, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) apply_override(doc, "seed", std::to_string(*o.seed));
    if (o.samples) apply_override(doc, "samples", std::to_string(*o.samples));
    return doc;
}

RunOptions run_options(const Options& o) { return RunOptions{o.strict_fp ? 1 : o.workers}; }

fs::path output_path(const Options& o, const std::string& subcommand, const std::string& fingerprint,
                     const char* ext) {
    fs::create_directories(o.out);
    return fs::path(o.out) / (subcommand + "-" + fingerprint + ext);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
}

using Estimator = std::function<EstimateReport(const Scenario&, const RunOptions&)>;

std::optional<Estimator> estimator_for(const std::string& name) {
    if (name == "verify-moment") return Estimator(verify_moment_bound);
    if (name == "verify-truncation") return Estimator(verify_truncation_convergence);
    if (name == "verify-interior") return Estimator(verify_interior_regularity);
    if (name == "verify-weighted") return Estimator(verify_weighted_regularity);
    if (name == "verify-holder") return Estimator(estimate_holder_exponent);
    return std::nullopt;
}

void summary_line(std::ostream& out, const EstimateReport& r, const fs::path& path) {
    out << r.estimate_id << ": verdict=" << r.verdict << " lhs=" << r.lhs.mean << " rhs=" << r.rhs.mean;
    if (r.n_emp) out << " n_emp=" << *r.n_emp;
    if (r.details.contains("gamma_fit") && r.details["gamma_fit"].is_number())
        out << " gamma_fit=" << r.details["gamma_fit"].get<double>();
    out << " -> " << path.string() << '\n';
}

int run_estimate(const std::string& name, const Options& o, std::ostream& out) {
    const Scenario s = parse_scenario(read_config(o));
    const EstimateReport r = (*estimator_for(name))(s, run_options(o));
    const std::string fp = config_fingerprint(s);
    json doc = to_json(r);
    doc["subcommand"] = name;
    doc["config"] = to_json(s);
    doc["version"] = code_version();
    const auto json_path = output_path(o, name, fp, ".json");
    write_text(json_path, doc.dump(2) + "\n");
    write_text(output_path(o, name, fp, ".csv"), report_csv_header() + "\n" + report_csv_row(r) + "\n");
    summary_line(out, r, json_path);
    return r.passed() ? kPass : kVerdictFail;
}

int run_check_assumptions(const Options& o, std::ostream& out) {
    const Scenario s = parse_scenario(read_config(o));
    const AssumptionSummary a = check_assumptions(s);
    json doc = a.details;
    doc["subcommand"] = "check-assumptions";
    doc["config"] = to_json(s);
    doc["version"] = code_version();
    const auto path = output_path(o, "check-assumptions", config_fingerprint(s), ".json");
    write_text(path, doc.dump(2) + "\n");
    out << "check-assumptions: " << (a.pass ? "pass" : "fail") << " -> " << path.string() << '\n';
    return a.pass ? kPass : kVerdictFail;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& tr, const Grid& grid) {
    std::ofstream f(path);
    f << std::setprecision(17);
    f << (grid.dim() == 1 ? "t,node,x,u\n" : "t,node,x,y,u\n");
    for (std::size_t s = 0; s < tr.snapshots.size(); ++s)
        for (std::size_t n = 0; n < grid.node_count(); ++n) {
            const Point x = grid.coord(n);
            f << tr.times[s] << ',' << n << ',' << x[0] << ',';
            if (grid.dim() > 1) f << x[1] << ',';
            f << tr.snapshots[s][n] << '\n';
        }
}

template <class T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_trajectory_binary(const fs::path& path, const Trajectory& tr, const Grid& grid, int stride) {
    std::ofstream f(path, std::ios::binary);
    f.write("MSPD", 4);
    put<std::uint32_t>(f, 1);
    put<std::uint32_t>(f, static_cast<std::uint32_t>(grid.dim()));
    put<std::uint32_t>(f, static_cast<std::uint32_t>(grid.points(0)));
    put<std::uint32_t>(f, static_cast<std::uint32_t>(grid.dim() > 1 ? grid.points(1) : 1));
    put<std::uint32_t>(f, static_cast<std::uint32_t>(stride));
    put<std::uint64_t>(f, tr.snapshots.size());
    for (std::size_t s = 0; s < tr.snapshots.size(); ++s) {
        put<double>(f, tr.times[s]);
        f.write(reinterpret_cast<const char*>(tr.snapshots[s].data()),
                static_cast<std::streamsize>(tr.snapshots[s].size() * sizeof(double)));
    }
}

int run_simulate(const Options& o, std::ostream& out) {
    const Scenario s = parse_scenario(read_config(o));
    const Problem problem = build_problem(s);
    const SolverConfig cfg = build_solver_config(s);
    const std::string fp = config_fingerprint(s);
    const double p = s.estimator.p;
    const Grid& grid = problem.grid;

    struct Row {
        double terminal_l2, sup_abs, sup_lp_pow, gradient_integral;
    };
    const auto rows = parallel_map(static_cast<std::size_t>(s.samples), run_options(o).workers, [&](std::size_t i) {
        const Trajectory tr = solve_trajectory(problem, build_noise(s, i), cfg);
        if (static_cast<int>(i) < s.output.dump_count && s.output.trajectory_dump != "none") {
            fs::create_directories(o.out);
            const std::string stem = "trajectory-" + fp + "-" + std::to_string(i);
            if (s.output.trajectory_dump == "csv")
                write_trajectory_csv(fs::path(o.out) / (stem + ".csv"), tr, grid);
            else
                write_trajectory_binary(fs::path(o.out) / (stem + ".bin"), tr, grid, cfg.snapshot_stride);
            std::ofstream noise(fs::path(o.out) / ("noise-" + fp + "-" + std::to_string(i) + ".csv"));
            tr.noise->write_csv(noise);
        }
        const auto& m = tr.moment(p);
        return Row{lp_norm(tr.snapshots.back(), 2.0, grid), tr.sup_abs, m.sup_lp_pow, m.gradient_integral};
    });

    std::ostringstream csv;
    csv << std::setprecision(17) << "sample,terminal_l2,sup_abs,sup_lp_pow,gradient_integral\n";
    std::vector<double> l2, sup, lp;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        csv << i << ',' << r.terminal_l2 << ',' << r.sup_abs << ',' << r.sup_lp_pow << ',' << r.gradient_integral
            << '\n';
        l2.push_back(r.terminal_l2);
        sup.push_back(r.sup_abs);
        lp.push_back(r.sup_lp_pow);
    }
    auto stat = [](const std::vector<double>& v) {
        const Statistic st = summarize(v);
        return json{{"mean", st.mean}, {"stderr", st.std_error}};
    };
    json doc{{"subcommand", "simulate"},
             {"config_hash", fp},
             {"samples", s.samples},
             {"p", p},
             {"terminal_l2", stat(l2)},
             {"sup_abs", stat(sup)},
             {"sup_lp_pow", stat(lp)},
             {"config", to_json(s)},
             {"version", code_version()}};
    const auto path = output_path(o, "simulate", fp, ".json");
    write_text(path, doc.dump(2) + "\n");
    write_text(output_path(o, "simulate", fp, ".csv"), csv.str());
    out << "simulate: " << s.samples << " trajectories, mean terminal L2 " << summarize(l2).mean << " -> "
        << path.string() << '\n';
    return kPass;
}

std::vector<std::string> split_values(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& r : raw) {
        std::stringstream ss(r);
        std::string item;
        // A JSON array value is kept whole; otherwise split on commas.
        if (!r.empty() && r.front() == '[') {
            out.push_back(r);
            continue;
        }
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(item);
    }
    return out;
}

int run_sweep(const Options& o, std::ostream& out) {
    const auto estimator = estimator_for(o.subcommand);
    if (!estimator) throw ConfigError("sweep --subcommand must be one of verify-moment, verify-truncation, "
                                      "verify-interior, verify-weighted, verify-holder");
    const auto values = split_values(o.values);
    if (values.empty()) throw ConfigError("sweep needs at least one --values entry");
    const json base = read_config(o);
    const Scenario base_scenario = parse_scenario(base);
    const std::string fp = config_fingerprint(base_scenario);

    std::ostringstream csv;
    csv << "axis,value," << report_csv_header() << '\n';
    json reports = json::array();
    bool all_pass = true;
    for (const auto& v : values) {
        json doc = base;
        apply_override(doc, o.axis, v);
        const Scenario s = parse_scenario(doc);
        const EstimateReport r = (*estimator)(s, run_options(o));
        csv << o.axis << ',' << v << ',' << report_csv_row(r) << '\n';
        json rj = to_json(r);
        rj["axis"] = o.axis;
        rj["value"] = v;
        reports.push_back(rj);
        all_pass = all_pass && r.passed();
        out << o.axis << '=' << v << ": verdict=" << r.verdict << '\n';
    }
    const std::string name = "sweep-" + o.subcommand;
    json doc{{"subcommand", "sweep"},
             {"estimate", o.subcommand},
             {"axis", o.axis},
             {"config_hash", fp},
             {"reports", reports},
             {"config", to_json(base_scenario)},
             {"version", code_version()}};
    write_text(output_path(o, name, fp, ".json"), doc.dump(2) + "\n");
    const auto path = output_path(o, name, fp, ".csv");
    write_text(path, csv.str());
    out << "sweep: " << values.size() << " rows -> " << path.string() << '\n';
    return all_pass ? kPass : kVerdictFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator and verification harness for semilinear SPDEs with monotone drift", "monospde"};
    app.require_subcommand(1);
    Options o;
    const std::pair<const char*, const char*> estimates[] = {
        {"verify-moment", "Empirical constant of the sup-L^p moment bound"},
        {"verify-truncation", "Moment bound along the truncated-drift family"},
        {"verify-interior", "Interior H^2 bound via difference quotients"},
        {"verify-weighted", "Weighted Sobolev bound near the boundary"},
        {"verify-holder", "Time-Hoelder exponent from increment moments"}};
    add_common(app.add_subcommand("check-assumptions", "Validate coefficients and drift"), o);
    add_common(app.add_subcommand("simulate", "Run trajectories and summarize them"), o);
    for (const auto& [name, help] : estimates) add_common(app.add_subcommand(name, help), o);
    CLI::App* sweep = app.add_subcommand("sweep", "Run one estimate over a list of values of one config key");
    add_common(sweep, o);
    sweep->add_option("--subcommand", o.subcommand, "Estimate to run")->required();
    sweep->add_option("--axis", o.axis, "Dotted config key, e.g. solver.dt")->required();
    sweep->add_option("--values", o.values, "Values (comma separated or repeated)")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsageError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "check-assumptions") return run_check_assumptions(o, out);
        if (name == "simulate") return run_simulate(o, out);
        if (name == "sweep") return run_sweep(o, out);
        return run_estimate(name, o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}

}  // namespace monospde::cli
