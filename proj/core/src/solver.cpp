#include "monospde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "monospde/errors.hpp"
#include "monospde/norms.hpp"

namespace monospde {

void SolverConfig::validate() const {
    if (!(final_time > 0.0)) throw ConfigError("solver: final time T must be positive");
    if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (dt > final_time) throw ConfigError("solver: dt exceeds the final time T");
    const double n = final_time / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
        throw ConfigError("solver: T must be an integer multiple of dt");
    if (!(tolerance > 0.0)) throw ConfigError("solver: tolerance must be positive");
    if (snapshot_stride < 1) throw ConfigError("solver: snapshot stride must be >= 1");
    if (max_iterations < 1) throw ConfigError("solver: max iterations must be >= 1");
    if (truncation && !(*truncation >= 0.0)) throw ConfigError("solver: truncation level must be non-negative");
    for (double p : tracked_p)
        if (!(p >= 2.0)) throw ConfigError("solver: tracked moment exponents must be >= 2");
}

std::size_t SolverConfig::steps() const {
    return static_cast<std::size_t>(std::llround(final_time / dt));
}

const MomentAccumulator& Trajectory::moment(double p) const {
    for (const auto& m : moments)
        if (m.p == p) return m;
    throw std::out_of_range("moment exponent " + std::to_string(p) + " was not tracked");
}

struct Stepper::Tables {
    std::vector<Point> x;
    Field f0;
    std::vector<Field> g;      // [mode][node]
    std::vector<Field> mu;     // [mode][node]
    std::vector<std::vector<Vec2>> sigma;  // [mode][node]
};

namespace {

void fill_tables(const Problem& pb, double t, auto& tab) {
    const std::size_t nn = pb.grid.node_count();
    const int modes = pb.coeffs.modes;
    tab.x.resize(nn);
    tab.f0.assign(nn, 0.0);
    tab.g.assign(modes, Field(nn, 0.0));
    tab.mu.assign(modes, Field(nn, 0.0));
    tab.sigma.assign(modes, std::vector<Vec2>(nn, Vec2{0.0, 0.0}));
    for (std::size_t n = 0; n < nn; ++n) {
        tab.x[n] = pb.grid.coord(n);
        if (!pb.grid.is_interior(n)) continue;
        tab.f0[n] = pb.forcing.f0(t, tab.x[n]);
        for (int k = 0; k < modes; ++k) {
            tab.g[k][n] = pb.forcing.g(t, tab.x[n], k);
            tab.mu[k][n] = pb.coeffs.mu(t, tab.x[n], k);
            tab.sigma[k][n] = pb.coeffs.sigma(t, tab.x[n], k);
        }
    }
}

TridiagonalSolver tridiagonal_system(const SparseMatrix& lmat, const Grid& grid, double dt) {
    const int n = grid.points(0) - 2;
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const std::size_t node = static_cast<std::size_t>(i + 1);
        di[i] = 1.0 - dt * lmat.at(node, node);
        if (i > 0) lo[i] = -dt * lmat.at(node, node - 1);
        if (i + 1 < n) up[i] = -dt * lmat.at(node, node + 1);
    }
    return TridiagonalSolver(std::move(lo), std::move(di), std::move(up));
}

}  // namespace

Stepper::Stepper(const Problem& problem, const SemilinearTerm& term, const SolverConfig& cfg)
    : problem_(&problem), term_(term), cfg_(cfg) {
    problem.coeffs.validate();
    if (problem.forcing.modes != problem.coeffs.modes)
        throw ConfigError("forcing and coefficients disagree on the number of noise modes");
    if (problem.forcing.time_independent && problem.coeffs.time_independent) {
        auto tab = std::make_shared<Tables>();
        fill_tables(problem, 0.0, *tab);
        fixed_tables_ = std::move(tab);
    }
    if (problem.coeffs.time_independent) {
        auto lmat = std::make_shared<SparseMatrix>(assemble_L(problem.coeffs, problem.grid, 0.0));
        if (cfg_.scheme == Scheme::SemiImplicit) {
            if (problem.grid.dim() == 1)
                fixed_tridiagonal_ = std::make_shared<TridiagonalSolver>(tridiagonal_system(*lmat, problem.grid, cfg_.dt));
            else
                fixed_system_ = std::make_shared<SparseMatrix>(lmat->shifted(1.0, -cfg_.dt));
        }
        fixed_operator_ = std::move(lmat);
    }
}

const Stepper::Tables& Stepper::tables_at(double t, Tables& scratch) const {
    if (fixed_tables_) return *fixed_tables_;
    fill_tables(*problem_, t, scratch);
    return scratch;
}

Field Stepper::solve_implicit(const Field& rhs, const Field& guess, double t_new) const {
    const Grid& grid = problem_->grid;
    Field out(rhs.size(), 0.0);
    if (grid.dim() == 1) {
        std::shared_ptr<const TridiagonalSolver> tri = fixed_tridiagonal_;
        if (!tri)
            tri = std::make_shared<TridiagonalSolver>(
                tridiagonal_system(assemble_L(problem_->coeffs, grid, t_new), grid, cfg_.dt));
        const std::size_t n = tri->size();
        tri->solve(std::span<const double>(rhs).subspan(1, n), std::span<double>(out).subspan(1, n));
        return out;
    }
    std::shared_ptr<const SparseMatrix> sys = fixed_system_;
    if (!sys)
        sys = std::make_shared<SparseMatrix>(assemble_L(problem_->coeffs, grid, t_new).shifted(1.0, -cfg_.dt));
    out = guess;
    for (std::size_t n = 0; n < out.size(); ++n)
        if (!grid.is_interior(n)) out[n] = 0.0;
    const IterativeResult res = problem_->coeffs.has_drift
                                    ? bicgstab(*sys, rhs, out, cfg_.tolerance, cfg_.max_iterations)
                                    : preconditioned_cg(*sys, rhs, out, cfg_.tolerance, cfg_.max_iterations);
    if (!res.converged) throw LinearSolveError(res.iterations, res.relative_residual);
    for (std::size_t n = 0; n < out.size(); ++n)
        if (!grid.is_interior(n)) out[n] = 0.0;
    return out;
}

Field Stepper::step(const Field& u, double t, std::span<const double> dW, std::size_t step_index) const {
    const Problem& pb = *problem_;
    const Grid& grid = pb.grid;
    const int d = grid.dim();
    const int modes = pb.coeffs.modes;
    if (static_cast<int>(dW.size()) != modes) throw std::invalid_argument("step: one increment per noise mode required");

    Tables scratch;
    const Tables& tab = tables_at(t, scratch);
    const double dt = cfg_.dt;

    Field rhs(u.size(), 0.0);
    for (std::size_t n = 0; n < u.size(); ++n) {
        if (!grid.is_interior(n)) continue;
        Vec2 grad{0.0, 0.0};
        for (int i = 0; i < d; ++i)
            grad[i] = (u[grid.neighbor(n, i, +1)] - u[grid.neighbor(n, i, -1)]) / (2.0 * grid.spacing(i));
        double v = u[n] + dt * (term_(t, tab.x[n], u[n], grad) + tab.f0[n]);
        for (int k = 0; k < modes; ++k) {
            const Vec2& s = tab.sigma[k][n];
            const double mk = s[0] * grad[0] + s[1] * grad[1] + tab.mu[k][n] * u[n];
            v += (mk + tab.g[k][n]) * dW[k];
        }
        rhs[n] = v;
    }

    Field next;
    if (cfg_.scheme == Scheme::SemiImplicit) {
        next = solve_implicit(rhs, u, t + dt);
    } else {
        const Field lu = fixed_operator_ ? fixed_operator_->multiply(u) : apply_L(u, pb.coeffs, grid, t);
        next = std::move(rhs);
        for (std::size_t n = 0; n < next.size(); ++n)
            if (grid.is_interior(n)) next[n] += dt * lu[n];
    }

    double sup = 0.0;
    for (double v : next) {
        if (!std::isfinite(v)) throw BlowUpError(step_index, t + dt, v);
        sup = std::max(sup, std::abs(v));
    }
    if (sup > cfg_.blowup_threshold) throw BlowUpError(step_index, t + dt, sup);
    return next;
}

Field step(const Field& u, double t, const Problem& problem, const SemilinearTerm& term, std::span<const double> dW,
           const SolverConfig& cfg) {
    return Stepper(problem, term, cfg).step(u, t, dW);
}

Trajectory solve_trajectory(const Problem& problem, std::shared_ptr<const NoisePath> path, const SolverConfig& cfg) {
    cfg.validate();
    if (!path) throw std::invalid_argument("solve_trajectory: missing noise path");
    const std::size_t steps = cfg.steps();
    if (path->modes() != problem.coeffs.modes)
        throw ConfigError("noise path has " + std::to_string(path->modes()) + " modes, coefficients expect " +
                          std::to_string(problem.coeffs.modes));
    if (path->steps() != steps || std::abs(path->dt() - cfg.dt) > 1e-12 * cfg.dt)
        throw ConfigError("noise path time grid does not match the solver time grid");
    if (problem.initial.size() != problem.grid.node_count())
        throw std::invalid_argument("initial condition does not match the grid");

    const SemilinearTerm term = cfg.truncation ? truncate(problem.term, *cfg.truncation) : problem.term;
    const Stepper stepper(problem, term, cfg);
    const Grid& grid = problem.grid;

    Trajectory tr;
    tr.noise = path;
    tr.initial = problem.initial;
    for (std::size_t n = 0; n < grid.node_count(); ++n)
        if (!grid.is_interior(n)) tr.initial[n] = 0.0;
    for (double p : cfg.tracked_p) tr.moments.push_back({p, 0.0, 0.0});

    Field u = tr.initial;
    std::vector<double> density(tr.moments.size());
    auto record = [&](double t) {
        tr.times.push_back(t);
        for (auto& m : tr.moments) m.sup_lp_pow = std::max(m.sup_lp_pow, lp_norm_pow(u, m.p, grid));
        tr.snapshots.push_back(u);
    };
    for (std::size_t i = 0; i < tr.moments.size(); ++i) density[i] = gradient_weighted_density(u, tr.moments[i].p, grid);
    tr.sup_abs = sup_norm(u);
    record(0.0);

    for (std::size_t s = 0; s < steps; ++s) {
        const double t = s * cfg.dt;
        u = stepper.step(u, t, path->step_increments(s), s);
        tr.sup_abs = std::max(tr.sup_abs, sup_norm(u));
        for (std::size_t i = 0; i < tr.moments.size(); ++i) {
            const double next = gradient_weighted_density(u, tr.moments[i].p, grid);
            tr.moments[i].gradient_integral += 0.5 * cfg.dt * (density[i] + next);
            density[i] = next;
        }
        if ((s + 1) % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || s + 1 == steps) record((s + 1) * cfg.dt);
    }
    return tr;
}

std::vector<Trajectory> solve_truncated_family(const Problem& problem, std::span<const double> levels,
                                               std::shared_ptr<const NoisePath> path, const SolverConfig& cfg) {
    std::vector<Trajectory> out;
    out.reserve(levels.size());
    for (double m : levels) {
        SolverConfig c = cfg;
        if (std::isfinite(m))
            c.truncation = cfg.truncation ? std::min(*cfg.truncation, m) : m;
        out.push_back(solve_trajectory(problem, path, c));
    }
    return out;
}

}  // namespace monospde
