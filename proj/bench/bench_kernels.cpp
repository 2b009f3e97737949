// Serial references against the OpenMP kernels. Thread counts come from the
// benchmark argument; 0 leaves the OpenMP default.

#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "chessflow/rotation.hpp"
#include "chessflow/spectral.hpp"

using namespace chessflow;

namespace {

void set_threads(const benchmark::State& state) {
    const int t = static_cast<int>(state.range(0));
    omp_set_num_threads(t > 0 ? t : omp_get_num_procs());
}

FourierField forcing(int K) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss;
    FourierField f(K);
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (std::make_pair(k1, k2) <= std::make_pair(-k1, -k2)) continue;
            const cplx c{gauss(rng), gauss(rng)};
            f.at(k1, k2) = c;
            f.at(-k1, -k2) = std::conj(c);
        }
    }
    return f;
}

const double kGoldenLambda = lambda_for_rotation(0.6180339887498949);

void BM_SweepSerial(benchmark::State& state) {
    const Domain d = Domain::tilted_square(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(serial::sweep(d, 199, 10'000, 0.123));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
    set_threads(state);
    const Domain d = Domain::tilted_square(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(sweep(d, 199, 10'000, 0.123));
}
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_SolveSerial(benchmark::State& state) {
    const FourierField f = forcing(64);
    SolverConfig cfg;
    cfg.lambda = kGoldenLambda;
    const std::vector<double> times{0.0, 0.5, 1.0, 1.5};
    for (auto _ : state) benchmark::DoNotOptimize(serial::solve(f, cfg, times));
}
BENCHMARK(BM_SolveSerial)->Unit(benchmark::kMillisecond);

void BM_SolveParallel(benchmark::State& state) {
    set_threads(state);
    const FourierField f = forcing(64);
    SolverConfig cfg;
    cfg.lambda = kGoldenLambda;
    const std::vector<double> times{0.0, 0.5, 1.0, 1.5};
    for (auto _ : state) benchmark::DoNotOptimize(solve(f, cfg, times));
}
BENCHMARK(BM_SolveParallel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_AnalyzeDirect(benchmark::State& state) {
    const Grid g = synthesize(forcing(16), 64);
    for (auto _ : state) benchmark::DoNotOptimize(serial::analyze(g, 16));
}
BENCHMARK(BM_AnalyzeDirect)->Unit(benchmark::kMillisecond);

void BM_AnalyzeSeparable(benchmark::State& state) {
    set_threads(state);
    const Grid g = synthesize(forcing(16), 64);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(g, 16));
}
BENCHMARK(BM_AnalyzeSeparable)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
