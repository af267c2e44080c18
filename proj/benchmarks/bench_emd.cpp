#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <crossframe/emd.hpp>

namespace {

std::vector<double> three_tone(std::size_t n, double sample_rate) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double tt = static_cast<double>(t) / sample_rate;
        x[t] = std::sin(2.0 * std::numbers::pi * 220.0 * tt) +
               0.7 * std::sin(2.0 * std::numbers::pi * 44.0 * tt) +
               0.4 * std::sin(2.0 * std::numbers::pi * 9.0 * tt);
    }
    return x;
}

void Decompose(benchmark::State& state) {
    const auto x = three_tone(static_cast<std::size_t>(state.range(0)), 8000.0);
    for (auto _ : state) {
        auto set = crossframe::decompose(std::span<const double>(x), crossframe::EmdConfig{});
        benchmark::DoNotOptimize(set.imfs.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Decompose)->RangeMultiplier(2)->Range(2048, 2048 << 4)->Complexity()
    ->Unit(benchmark::kMillisecond);

void FindExtrema(benchmark::State& state) {
    const auto x = three_tone(static_cast<std::size_t>(state.range(0)), 8000.0);
    for (auto _ : state) {
        auto ex = crossframe::find_extrema(x);
        benchmark::DoNotOptimize(ex.maxima.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(FindExtrema)->RangeMultiplier(4)->Range(4096, 4096 << 6)->Complexity();

void Envelope(benchmark::State& state) {
    const auto x = three_tone(static_cast<std::size_t>(state.range(0)), 8000.0);
    const auto ex = crossframe::find_extrema(x);
    for (auto _ : state) {
        auto env = crossframe::envelope(x, ex.maxima);
        benchmark::DoNotOptimize(env.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Envelope)->RangeMultiplier(4)->Range(4096, 4096 << 6)->Complexity();

}  // namespace
