// Microbenchmarks for the hot paths: assembly, dense eigendecomposition,
// spectral transforms, the semigroup quadrature, and one solver step.

#include "fraclab/linsolve.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/semigroup.hpp"
#include "fraclab/solver.hpp"
#include "fraclab/spectral.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace fraclab;

namespace {

EllipticOperator make_op_1d(int n) {
    const Grid g = build_grid_1d(1.0, n);
    return assemble_elliptic(g, sample_coefficient(g, CoefficientSpec::smooth_anisotropic()));
}

std::vector<double> probe(int n) {
    Rng rng(7);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& v : u) v = rng.symmetric();
    return u;
}

void BM_assemble_2d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = build_grid_2d(1.0, 1.0, n, n);
    const CoefficientField coeff =
        sample_coefficient(g, CoefficientSpec::rotated(0.7, 3.0, 0.5));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_elliptic(g, coeff));
    state.SetComplexityN(g.cells);
}
BENCHMARK(BM_assemble_2d)->Arg(16)->Arg(32)->Arg(48)->Complexity();

void BM_eigendecompose_1d(benchmark::State& state) {
    const EllipticOperator op = make_op_1d(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(eigendecompose(op));
    state.SetComplexityN(op.grid.cells);
}
BENCHMARK(BM_eigendecompose_1d)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_apply_power(benchmark::State& state) {
    const EllipticOperator op = make_op_1d(256);
    const SpectralDecomposition dec = eigendecompose(op);
    const std::vector<double> u = probe(op.grid.cells);
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_power(dec, -0.5, u));
}
BENCHMARK(BM_apply_power);

void BM_semigroup_inverse(benchmark::State& state) {
    const EllipticOperator op = make_op_1d(static_cast<int>(state.range(0)));
    const std::vector<double> u = probe(op.grid.cells);
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_inverse_power_semigroup(op, 0.5, u));
}
BENCHMARK(BM_semigroup_inverse)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_solver_step(benchmark::State& state) {
    const Grid g = build_grid_1d(1.0, 128);
    const EllipticOperator op =
        assemble_elliptic(g, sample_coefficient(g, CoefficientSpec::constant(1.0)));
    const SpectralDecomposition dec = eigendecompose(op);
    SolverParams p;
    p.s = 0.5;
    p.delta = 1e-3;
    p.mu = 1e-3;
    p.dt_max = 1e-3;
    p.t_end = 1.0;
    const DegenerateSolver solver(op, dec, p);
    InitialSpec init;
    const std::vector<double> u0 = prepare_initial(op, init, p.delta);
    for (auto _ : state) {
        state.PauseTiming();
        SolverState st = solver.make_state(u0);
        state.ResumeTiming();
        solver.step(st, 1e-3);
    }
}
BENCHMARK(BM_solver_step);

void BM_shifted_solve(benchmark::State& state) {
    const EllipticOperator op = make_op_1d(256);
    const std::vector<double> rhs = probe(op.grid.cells);
    std::vector<double> x(rhs.size(), 0.0);
    for (auto _ : state) {
        shifted_solve(op.KA, 1e-3, rhs, x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_shifted_solve);

} // namespace

BENCHMARK_MAIN();
