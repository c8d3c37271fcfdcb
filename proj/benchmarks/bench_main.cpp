#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "monospde/coefficients.hpp"
#include "monospde/noise.hpp"
#include "monospde/norms.hpp"
#include "monospde/solver.hpp"

using namespace monospde;

namespace {

Problem gl_problem(const Grid& g, int modes) {
    ConstantCoefficients c;
    c.sigma = 0.3;
    c.mu = 0.3;
    Field phi(g.node_count());
    for (std::size_t n = 0; n < phi.size(); ++n) {
        const Point x = g.coord(n);
        phi[n] = std::sin(std::numbers::pi * x[0]) * (g.dim() > 1 ? std::sin(std::numbers::pi * x[1]) : 1.0);
    }
    return Problem{g, constant_coefficients(g.dim(), modes, c, 4.0, 0.5, 2), zero_forcing(modes), ginzburg_landau(4.0),
                   phi};
}

void run_steps(benchmark::State& state, const Grid& g) {
    const int modes = 8;
    const Problem problem = gl_problem(g, modes);
    SolverConfig cfg;
    cfg.final_time = 0.01;
    cfg.dt = 1e-3;
    const auto noise = std::make_shared<const NoisePath>(sample_path(modes, cfg.steps(), cfg.dt, 1, 0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_trajectory(problem, noise, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.steps()));
}

}  // namespace

static void BM_Step1D(benchmark::State& state) {
    run_steps(state, build_grid(DomainSpec{{1.0}, {static_cast<int>(state.range(0))}}));
}
BENCHMARK(BM_Step1D)->Arg(64)->Arg(128)->Arg(256);

static void BM_Step2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    run_steps(state, build_grid(DomainSpec{{1.0, 1.0}, {n, n}}));
}
BENCHMARK(BM_Step2D)->Arg(17)->Arg(33);

static void BM_WeightedNorm(benchmark::State& state) {
    const Grid g = build_grid(DomainSpec{{1.0}, {static_cast<int>(state.range(0))}});
    const DistanceField dist = boundary_distance(g);
    const Field u(g.node_count(), 1.0);
    const WeightedNormSpec spec{2, 8.0, 7.5};
    for (auto _ : state) benchmark::DoNotOptimize(weighted_norm_pow(u, spec, g, dist));
}
BENCHMARK(BM_WeightedNorm)->Arg(256)->Arg(1024);

static void BM_SamplePath(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sample_path(8, static_cast<std::size_t>(state.range(0)), 1e-3, 1, 0));
}
BENCHMARK(BM_SamplePath)->Arg(250)->Arg(1000);

BENCHMARK_MAIN();
