#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <crossframe/melspec.hpp>

namespace {

void MelSpectrogram(benchmark::State& state) {
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (std::size_t t = 0; t < x.size(); ++t) {
        x[t] = std::sin(2.0 * std::numbers::pi * 440.0 * static_cast<double>(t) / 44100.0);
    }
    const crossframe::MelConfig cfg;
    for (auto _ : state) {
        auto m = crossframe::mel_spectrogram(x, cfg);
        benchmark::DoNotOptimize(m.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MelSpectrogram)->RangeMultiplier(4)->Range(4096, 4096 << 6)->Complexity()
    ->Unit(benchmark::kMicrosecond);

void Filterbank(benchmark::State& state) {
    const crossframe::MelConfig cfg;
    for (auto _ : state) {
        auto fb = crossframe::mel_filterbank(cfg);
        benchmark::DoNotOptimize(fb.weights.data());
    }
}
BENCHMARK(Filterbank);

}  // namespace
