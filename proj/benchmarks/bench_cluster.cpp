#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include <crossframe/cluster.hpp>

namespace {

std::vector<crossframe::ImfFeatureVector> synthetic_points(std::size_t n) {
    std::vector<crossframe::ImfFeatureVector> pts(n);
    std::uint64_t s = 0x9E3779B97F4A7C15ULL;
    for (auto& p : pts) {
        for (auto& v : p.values) {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            v = static_cast<double>(s >> 11) * 0x1.0p-53;
        }
    }
    return pts;
}

void KMeans(benchmark::State& state) {
    const auto pts = synthetic_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = crossframe::kmeans(pts, 3, 42);
        benchmark::DoNotOptimize(r.assignments.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(KMeans)->RangeMultiplier(2)->Range(4, 64)->Complexity();

}  // namespace
