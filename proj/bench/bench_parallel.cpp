#include <benchmark/benchmark.h>

#include "fracspec/nystrom.hpp"
#include "fracspec/parallel.hpp"

using namespace fracspec;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_BuildMatrix(benchmark::State& state) {
    const NystromGrid grid(static_cast<int>(state.range(0)));
    const ProcessSpec sp = fou(0.75, -1.0);
    for (auto _ : state) {
        DenseMatrix A = build_matrix(sp, grid, exec_of(state));
        benchmark::DoNotOptimize(A.data());
    }
    state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_Matvec(benchmark::State& state) {
    const NystromGrid grid(static_cast<int>(state.range(0)));
    const DenseMatrix A = build_matrix(fbm(0.5), grid);
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(grid.size());
    Eigen::VectorXd y(grid.size());
    for (auto _ : state) {
        matvec(A, x, y, exec_of(state));
        benchmark::DoNotOptimize(y.data());
    }
    state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_Solve(benchmark::State& state) {
    const NystromGrid grid(static_cast<int>(state.range(0)));
    const ProcessSpec sp = fou(0.75, -1.0);
    for (auto _ : state) {
        auto est = solve(sp, grid, 10, 1e-10, exec_of(state));
        benchmark::DoNotOptimize(est.data());
    }
    state.SetLabel(state.range(1) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_BuildMatrix)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matvec)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Solve)->ArgsProduct({{1000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
