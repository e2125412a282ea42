#include <benchmark/benchmark.h>

#include "sfcscan/experiments.hpp"
#include "sfcscan/metrics.hpp"
#include "sfcscan/ssm.hpp"

using namespace sfcscan;

namespace {

void generate(benchmark::State& state, Family family) {
    const auto n = state.range(0);
    for (auto _ : state) {
        auto order = make_order(family, {n, n});
        benchmark::DoNotOptimize(order);
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_GenerateRaster(benchmark::State& s) { generate(s, Family::Raster); }
void BM_GenerateHilbert(benchmark::State& s) { generate(s, Family::Hilbert); }
void BM_GeneratePeano(benchmark::State& s) { generate(s, Family::Peano); }
void BM_GenerateLocal(benchmark::State& s) { generate(s, Family::LocalWindow); }

BENCHMARK(BM_GenerateRaster)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateHilbert)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneratePeano)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateLocal)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_ScanOverGrid(benchmark::State& state) {
    const auto n = state.range(0);
    const auto m = state.range(1);
    const auto field = make_holder_field({n, n}, 0.5, 1).values;
    const auto base = ContinuousSSM::random_diagonal(m, 2);
    const auto params = SelectiveParams::random(base, 1, 3);
    const auto order = hilbert_order({n, n});
    for (auto _ : state) {
        auto out = scan_over_grid(order, field, params, base);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ScanOverGrid)
    ->ArgsProduct({{64, 256}, {4, 16}})
    ->Unit(benchmark::kMillisecond);

void BM_Dispersion(benchmark::State& state) {
    const auto n = state.range(0);
    const auto samples = prefix_samples(hilbert_order({n, n}), static_cast<std::size_t>(n * n / 4));
    for (auto _ : state) benchmark::DoNotOptimize(dispersion(samples));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Dispersion)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
