// Serial vs OpenMP batch execution of fig4-racy runs.
#include <forksim/scenario/builtins.hpp>
#include <forksim/scenario/sweep.hpp>

#include <benchmark/benchmark.h>

using namespace forksim::scenario;

namespace {

std::vector<RunJob> jobs(std::size_t n) {
    return sweep_jobs(builtin_fig4_racy(), {0x2000, 0x10000}, n / 2, 100);
}

void BM_BatchSerial(benchmark::State& state) {
    const auto js = jobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(js));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(js.size()));
}

void BM_BatchParallel(benchmark::State& state) {
    const auto js = jobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_batch_parallel(js));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(js.size()));
}

} // namespace

BENCHMARK(BM_BatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
