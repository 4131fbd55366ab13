// Serial reference vs OpenMP runner on the same experiment.

#include <benchmark/benchmark.h>

#include "otsim/harness.hpp"

namespace {

otsim::ExperimentConfig bench_config(otsim::AliceMode mode, std::size_t trials)
{
    otsim::ExperimentConfig c;
    c.params.beta = otsim::Beta(0.5);
    c.params.n_states = 200;
    c.params.test_fraction = 0.25;
    c.params.set_size = 25;
    c.params.mode = mode;
    c.params.seed = 1;
    c.trials = trials;
    return c;
}

void BM_Serial(benchmark::State& state)
{
    const auto c = bench_config(otsim::AliceMode::Epr, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(otsim::run_experiment_serial(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state)
{
    const auto c = bench_config(otsim::AliceMode::Epr, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(otsim::run_experiment(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CorrectionUnitary(benchmark::State& state)
{
    const otsim::Beta beta(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(otsim::correction_unitary(beta));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CorrectionUnitary);

BENCHMARK_MAIN();
