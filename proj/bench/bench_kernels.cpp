// Serial reference kernels vs their OpenMP counterparts.
// Arg 0 = serial, arg 1 = parallel with the default thread count.
#include <benchmark/benchmark.h>

#include <vector>

#include "driftdet/simulator.hpp"
#include "driftdet/solver.hpp"
#include "driftdet/value.hpp"

using namespace driftdet;

namespace {

const ModelParams kParams{1.0, 2.0};

SolverConfig coarse() {
    SolverConfig c;
    c.n0 = 9;
    c.n1 = 13;
    c.quad.n_hermite = 16;
    c.quad.time_nodes = 8;
    c.tol_sup = 5e-3;
    return c;
}

Execution mode(const benchmark::State& s) { return s.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

const Boundaries& boundaries() {
    static const Boundaries b = picard_solve(kParams, coarse());
    return b;
}

void BM_Solve(benchmark::State& state) {
    SolverConfig c = coarse();
    c.execution = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(picard_solve(kParams, c));
}

void BM_ValueBatch(benchmark::State& state) {
    SolverConfig c = coarse();
    c.execution = mode(state);
    std::vector<PhiPoint> pts;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) pts.push_back({0.3 * i, 0.3 * j});
    }
    const Boundaries& b = boundaries();
    for (auto _ : state) benchmark::DoNotOptimize(value_batch(pts, b, c));
}

void BM_SimulateRisk(benchmark::State& state) {
    SimConfig s;
    s.n_paths = 20000;
    s.execution = mode(state);
    const Boundaries& b = boundaries();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_risk_ppi({0.34, 0.33, 0.33}, kParams, b, s));
}

}  // namespace

BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_ValueBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateRisk)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
