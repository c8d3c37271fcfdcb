#include "monospde/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "monospde/errors.hpp"
#include "monospde/sampled_field.hpp"

#ifndef MONOSPDE_VERSION
#define MONOSPDE_VERSION "0.0.0"
#endif

namespace monospde {

using nlohmann::json;

std::string code_version() { return MONOSPDE_VERSION; }

namespace {

/// Reads keys of one JSON object and remembers which were consumed, so
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& node, std::string path, std::vector<std::string>& unknown)
        : node_(node), path_(std::move(path)), unknown_(unknown) {
        if (!node_.is_object()) throw ConfigError(label() + " must be an object");
    }
    ~Section() = default;

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("wrong type for key '" + qualified(key) + "'");
        }
    }

    template <class T>
    void read_optional(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) return;
        if (it->is_null()) {
            out.reset();
            return;
        }
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("wrong type for key '" + qualified(key) + "'");
        }
    }

    /// Sub-object, or nullptr when absent.
    const json* child(const char* key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!seen_.count(it.key())) unknown_.push_back(qualified(it.key()));
    }

private:
    std::string label() const { return path_.empty() ? "config" : "'" + path_ + "'"; }
    const json& node_;
    std::string path_;
    std::vector<std::string>& unknown_;
    std::set<std::string> seen_;
};

void read_field_preset(Section& parent, const char* key, const std::string& path, FieldPreset& out,
                       std::vector<std::string>& unknown) {
    if (const json* node = parent.child(key)) {
        Section s(*node, path, unknown);
        s.read("preset", out.preset);
        s.read("amplitude", out.amplitude);
        s.finish();
    }
}

json field_preset_json(const FieldPreset& f) { return json{{"preset", f.preset}, {"amplitude", f.amplitude}}; }

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
    for (const char* o : options)
        if (v == o) return true;
    return false;
}

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

void Scenario::validate() const {
    require(domain.extents.size() == 1 || domain.extents.size() == 2, "domain.extents must have 1 or 2 entries");
    require(domain.points.size() == domain.extents.size(), "domain.points must match domain.extents in length");
    for (double e : domain.extents) require(std::isfinite(e) && e > 0.0, "domain.extents must be positive");
    for (int n : domain.points) require(n >= 4, "domain.points must be at least 4 per axis");
    const int d = static_cast<int>(domain.extents.size());

    const auto& c = coefficients;
    require(one_of(c.preset, {"constant", "smooth_varying", "anisotropic", "sampled"}),
            "unknown coefficients.preset '" + c.preset + "'");
    require(c.bound > 0.0, "coefficients.K must be positive");
    require(c.ellipticity > 0.0, "coefficients.kappa must be positive");
    require(c.derivative_order >= 0, "coefficients.n_avail must be non-negative");
    require(c.b.size() == 1 || c.b.size() == 2, "coefficients.b must have 1 or 2 entries");
    if (c.preset == "sampled") require(!c.a_csv.empty(), "coefficients.a_csv is required for the sampled preset");

    require(one_of(semilinear.preset, {"ginzburg_landau", "zero", "lipschitz_tanh"}),
            "unknown semilinear.preset '" + semilinear.preset + "'");
    require(semilinear.alpha >= 1.0, "semilinear.alpha must be at least 1");
    if (semilinear.bound) require(*semilinear.bound > 0.0, "semilinear.K must be positive");

    require(one_of(initial.preset, {"zero", "sine", "bump"}), "unknown initial.preset '" + initial.preset + "'");
    require(one_of(f0.preset, {"zero", "constant", "sine"}), "unknown forcing.f0.preset '" + f0.preset + "'");
    require(one_of(g.preset, {"zero", "constant", "sine_modes"}), "unknown forcing.g.preset '" + g.preset + "'");
    require(modes >= 0, "modes must be non-negative");

    const auto& sv = solver;
    require(sv.refine >= 1 && (sv.refine & (sv.refine - 1)) == 0, "solver.refine must be a power of two");
    require(one_of(sv.scheme, {"semi-implicit", "explicit"}), "unknown solver.scheme '" + sv.scheme + "'");
    if (sv.truncation) require(*sv.truncation >= 0.0, "solver.truncation must be non-negative");
    require(sv.max_iterations > 0, "solver.max_iterations must be positive");
    build_solver_config(*this).validate();
    {
        SolverConfig coarse = build_solver_config(*this);
        coarse.dt = sv.dt;
        coarse.validate();
    }

    const auto& e = estimator;
    require(e.p >= 2.0, "estimator.p must be at least 2");
    require(e.q >= 2.0, "estimator.q must be at least 2");
    require(e.order >= 0 && e.order <= 2, "estimator.order must be 0, 1 or 2");
    require(e.margin > 0.0, "estimator.margin must be positive");
    for (double ext : domain.extents) require(e.margin < ext / 2.0, "estimator.margin must be below half the extent");
    for (int lag : e.lags) require(lag >= 2, "estimator.lags must be at least 2 steps");
    require(e.pairs >= 1, "estimator.pairs must be positive");
    for (double m : e.m_list) require(m >= 0.0, "estimator.m_list entries must be non-negative");
    require(e.stability_factor > 1.0, "estimator.stability_factor must exceed 1");
    require(e.holder_tolerance >= 0.0, "estimator.holder_tolerance must be non-negative");
    require(e.coercivity_trials >= 1, "estimator.coercivity_trials must be positive");
    require(e.assumption_samples >= 1, "estimator.assumption_samples must be positive");
    (void)d;

    require(one_of(output.trajectory_dump, {"none", "csv", "binary"}),
            "unknown output.trajectory_dump '" + output.trajectory_dump + "'");
    require(output.dump_count >= 0, "output.dump_count must be non-negative");
    require(samples >= 1, "samples must be positive");
}

Scenario parse_scenario(const json& config) {
    Scenario s;
    std::vector<std::string> unknown;
    Section root(config, "", unknown);

    if (const json* node = root.child("domain")) {
        Section sec(*node, "domain", unknown);
        sec.read("extents", s.domain.extents);
        sec.read("points", s.domain.points);
        sec.finish();
    }
    if (const json* node = root.child("coefficients")) {
        Section sec(*node, "coefficients", unknown);
        auto& c = s.coefficients;
        sec.read("preset", c.preset);
        sec.read("a", c.a);
        sec.read("a11", c.a11);
        sec.read("a12", c.a12);
        sec.read("a22", c.a22);
        sec.read("b", c.b);
        sec.read("c", c.c);
        sec.read("sigma", c.sigma);
        sec.read("mu", c.mu);
        sec.read("a_csv", c.a_csv);
        sec.read("c_csv", c.c_csv);
        sec.read("K", c.bound);
        sec.read("kappa", c.ellipticity);
        sec.read("n_avail", c.derivative_order);
        sec.finish();
    }
    if (const json* node = root.child("semilinear")) {
        Section sec(*node, "semilinear", unknown);
        sec.read("preset", s.semilinear.preset);
        sec.read("alpha", s.semilinear.alpha);
        sec.read("scale", s.semilinear.scale);
        sec.read_optional("K", s.semilinear.bound);
        sec.finish();
    }
    if (const json* node = root.child("forcing")) {
        Section sec(*node, "forcing", unknown);
        read_field_preset(sec, "f0", "forcing.f0", s.f0, unknown);
        read_field_preset(sec, "g", "forcing.g", s.g, unknown);
        sec.finish();
    }
    read_field_preset(root, "initial", "initial", s.initial, unknown);
    root.read("modes", s.modes);
    if (const json* node = root.child("solver")) {
        Section sec(*node, "solver", unknown);
        auto& v = s.solver;
        sec.read("T", v.final_time);
        sec.read("dt", v.dt);
        sec.read("refine", v.refine);
        sec.read("scheme", v.scheme);
        sec.read_optional("truncation", v.truncation);
        sec.read("snapshot_stride", v.snapshot_stride);
        sec.read("tolerance", v.tolerance);
        sec.read("max_iterations", v.max_iterations);
        sec.finish();
    }
    if (const json* node = root.child("estimator")) {
        Section sec(*node, "estimator", unknown);
        auto& e = s.estimator;
        sec.read("p", e.p);
        sec.read("q", e.q);
        sec.read_optional("theta", e.theta);
        sec.read("order", e.order);
        sec.read("margin", e.margin);
        sec.read("lags", e.lags);
        sec.read("pairs", e.pairs);
        sec.read("m_list", e.m_list);
        sec.read("refinement_check", e.refinement_check);
        sec.read("stability_factor", e.stability_factor);
        sec.read("holder_tolerance", e.holder_tolerance);
        sec.read("coercivity_trials", e.coercivity_trials);
        sec.read("assumption_samples", e.assumption_samples);
        sec.finish();
    }
    if (const json* node = root.child("output")) {
        Section sec(*node, "output", unknown);
        sec.read("trajectory_dump", s.output.trajectory_dump);
        sec.read("dump_count", s.output.dump_count);
        sec.finish();
    }
    root.read("seed", s.seed);
    root.read("samples", s.samples);
    root.finish();

    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_scenario(doc);
}

json to_json(const Scenario& s) {
    const auto& c = s.coefficients;
    const auto& v = s.solver;
    const auto& e = s.estimator;
    return json{
        {"domain", {{"extents", s.domain.extents}, {"points", s.domain.points}}},
        {"coefficients",
         {{"preset", c.preset},
          {"a", c.a},
          {"a11", c.a11},
          {"a12", c.a12},
          {"a22", c.a22},
          {"b", c.b},
          {"c", c.c},
          {"sigma", c.sigma},
          {"mu", c.mu},
          {"a_csv", c.a_csv},
          {"c_csv", c.c_csv},
          {"K", c.bound},
          {"kappa", c.ellipticity},
          {"n_avail", c.derivative_order}}},
        {"semilinear",
         {{"preset", s.semilinear.preset},
          {"alpha", s.semilinear.alpha},
          {"scale", s.semilinear.scale},
          {"K", optional_json(s.semilinear.bound)}}},
        {"forcing", {{"f0", field_preset_json(s.f0)}, {"g", field_preset_json(s.g)}}},
        {"initial", field_preset_json(s.initial)},
        {"modes", s.modes},
        {"solver",
         {{"T", v.final_time},
          {"dt", v.dt},
          {"refine", v.refine},
          {"scheme", v.scheme},
          {"truncation", optional_json(v.truncation)},
          {"snapshot_stride", v.snapshot_stride},
          {"tolerance", v.tolerance},
          {"max_iterations", v.max_iterations}}},
        {"estimator",
         {{"p", e.p},
          {"q", e.q},
          {"theta", optional_json(e.theta)},
          {"order", e.order},
          {"margin", e.margin},
          {"lags", e.lags},
          {"pairs", e.pairs},
          {"m_list", e.m_list},
          {"refinement_check", e.refinement_check},
          {"stability_factor", e.stability_factor},
          {"holder_tolerance", e.holder_tolerance},
          {"coercivity_trials", e.coercivity_trials},
          {"assumption_samples", e.assumption_samples}}},
        {"output", {{"trajectory_dump", s.output.trajectory_dump}, {"dump_count", s.output.dump_count}}},
        {"seed", s.seed},
        {"samples", s.samples},
    };
}

void apply_override(json& config, const std::string& dotted_key, const std::string& value) {
    if (dotted_key.empty()) throw ConfigError("empty override key");
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;
    }
    json* node = &config;
    std::string::size_type start = 0;
    while (true) {
        const auto dot = dotted_key.find('.', start);
        const std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("malformed override key '" + dotted_key + "'");
        if (!node->is_object()) {
            if (!node->is_null()) throw ConfigError("override key '" + dotted_key + "' descends into a non-object");
            *node = json::object();
        }
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

std::string config_fingerprint(const Scenario& s) {
    const std::string text = to_json(s).dump() + "|" + code_version();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

/// prod_i sin(pi x_i / L_i)
double sine_profile(Point x, const std::vector<double>& L) {
    double v = 1.0;
    for (std::size_t i = 0; i < L.size(); ++i) v *= std::sin(std::numbers::pi * x[i] / L[i]);
    return v;
}

/// prod_i 4 x_i (L_i - x_i) / L_i^2, squared for a smooth flat start at the boundary.
double bump_profile(Point x, const std::vector<double>& L) {
    double v = 1.0;
    for (std::size_t i = 0; i < L.size(); ++i) {
        const double s = 4.0 * x[i] * (L[i] - x[i]) / (L[i] * L[i]);
        v *= s * s;
    }
    return v;
}

CoefficientSet build_coefficients(const Scenario& s, int dim) {
    const auto& c = s.coefficients;
    ConstantCoefficients base;
    base.a = c.a;
    base.b = {c.b[0], c.b.size() > 1 ? c.b[1] : 0.0};
    if (dim == 1) base.b[1] = 0.0;
    base.c = c.c;
    base.sigma = c.sigma;
    base.mu = c.mu;
    if (c.preset == "constant")
        return constant_coefficients(dim, s.modes, base, c.bound, c.ellipticity, c.derivative_order);
    if (c.preset == "smooth_varying")
        return smooth_coefficients(dim, s.modes, base, c.bound, c.ellipticity, c.derivative_order);
    if (c.preset == "anisotropic")
        return anisotropic_coefficients(dim, s.modes, c.a11, c.a12, c.a22, base, c.bound, c.ellipticity,
                                        c.derivative_order);
    // sampled
    CoefficientSet cs = constant_coefficients(dim, s.modes, base, c.bound, c.ellipticity, c.derivative_order);
    auto a = std::make_shared<const SampledField>(SampledField::load_csv(c.a_csv, dim));
    cs.a = [a](double t, Point x) { return Mat2::scalar((*a)(t, x)); };
    bool time_independent = a->time_independent();
    if (!c.c_csv.empty()) {
        auto cf = std::make_shared<const SampledField>(SampledField::load_csv(c.c_csv, dim));
        cs.c = [cf](double t, Point x) { return (*cf)(t, x); };
        time_independent = time_independent && cf->time_independent();
    }
    cs.time_independent = time_independent;
    return cs;
}

SemilinearTerm build_term(const Scenario& s) {
    const auto& sl = s.semilinear;
    SemilinearTerm term = sl.preset == "ginzburg_landau" ? ginzburg_landau(sl.alpha)
                          : sl.preset == "zero"          ? zero_term()
                                                         : lipschitz_tanh(sl.scale);
    if (sl.bound) {
        term = SemilinearTerm([term](double t, Point x, double r, Vec2 z) { return term.untruncated(t, x, r, z); },
                              *sl.bound, term.alpha(), term.name(), term.uses_gradient());
    }
    return term;
}

ForcingSet build_forcing(const Scenario& s) {
    ForcingSet fs = zero_forcing(s.modes);
    const auto L = s.domain.extents;
    const double a0 = s.f0.amplitude;
    if (s.f0.preset == "constant")
        fs.f0 = [a0](double, Point) { return a0; };
    else if (s.f0.preset == "sine")
        fs.f0 = [a0, L](double, Point x) { return a0 * sine_profile(x, L); };

    const double ag = s.g.amplitude;
    const double per_mode = s.modes > 0 ? 1.0 / std::sqrt(static_cast<double>(s.modes)) : 0.0;
    if (s.g.preset == "constant") {
        fs.g = [ag, per_mode](double, Point, int) { return ag * per_mode; };
    } else if (s.g.preset == "sine_modes") {
        fs.g = [ag, L](double, Point x, int k) {
            double v = ag * std::sin(std::numbers::pi * (k + 1) * x[0] / L[0]) / (k + 1);
            if (L.size() > 1) v *= std::sin(std::numbers::pi * x[1] / L[1]);
            return v;
        };
    }
    return fs;
}

}  // namespace

SolverConfig build_solver_config(const Scenario& s) {
    SolverConfig cfg;
    cfg.final_time = s.solver.final_time;
    cfg.dt = s.solver.dt / s.solver.refine;
    cfg.scheme = s.solver.scheme == "explicit" ? Scheme::Explicit : Scheme::SemiImplicit;
    cfg.truncation = s.solver.truncation;
    cfg.snapshot_stride = s.solver.snapshot_stride;
    cfg.tolerance = s.solver.tolerance;
    cfg.max_iterations = static_cast<std::size_t>(std::max(1, s.solver.max_iterations));
    cfg.tracked_p = {2.0};
    if (s.estimator.p != 2.0) cfg.tracked_p.push_back(s.estimator.p);
    return cfg;
}

Problem build_problem(const Scenario& s) {
    const Grid grid = build_grid(DomainSpec{s.domain.extents, s.domain.points});
    const int dim = grid.dim();
    CoefficientSet coeffs = build_coefficients(s, dim);
    ForcingSet forcing = build_forcing(s);
    SemilinearTerm term = build_term(s);

    Field initial(grid.node_count(), 0.0);
    const auto& L = s.domain.extents;
    const double amp = s.initial.amplitude;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (grid.is_boundary(n)) continue;
        const Point x = grid.coord(n);
        if (s.initial.preset == "sine")
            initial[n] = amp * sine_profile(x, L);
        else if (s.initial.preset == "bump")
            initial[n] = amp * bump_profile(x, L);
    }
    return Problem{grid, std::move(coeffs), std::move(forcing), std::move(term), std::move(initial)};
}

std::shared_ptr<const NoisePath> build_noise(const Scenario& s, std::uint64_t stream) {
    const std::size_t coarse_steps =
        static_cast<std::size_t>(std::llround(s.solver.final_time / s.solver.dt));
    NoisePath path = sample_path(s.modes, coarse_steps, s.solver.dt, s.seed, stream);
    if (s.solver.refine > 1) path = brownian_bridge_refine(path, s.solver.refine);
    return std::make_shared<const NoisePath>(std::move(path));
}

Scenario refined_in_space(const Scenario& s) {
    Scenario r = s;
    for (int& n : r.domain.points) n = 2 * (n - 1) + 1;
    return r;
}

Scenario refined_in_time(const Scenario& s) {
    Scenario r = s;
    r.solver.refine *= 2;
    r.solver.snapshot_stride *= 2;
    for (int& lag : r.estimator.lags) lag *= 2;
    return r;
}

}  // namespace monospde
