#include "dendro/arith.hpp"
#include "dendro/decomposition.hpp"
#include "dendro/dynamics.hpp"
#include "dendro/gehman.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace dendro;

static void BM_Sieve(benchmark::State& state) {
    for (auto _ : state) {
        SieveTable t(state.range(0));
        benchmark::DoNotOptimize(t.mu(state.range(0)));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sieve)->Range(1 << 14, 1 << 22)->Complexity(benchmark::oN);

static void BM_Distance(benchmark::State& state) {
    const Dendrite X = random_dendrite(static_cast<int>(state.range(0)), 1);
    std::mt19937_64 rng(2);
    std::vector<DPoint> pts;
    for (int i = 0; i < 256; ++i) pts.push_back(random_point(X, rng));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(X.distance(pts[i & 255], pts[(i * 7 + 3) & 255]));
        ++i;
    }
}
BENCHMARK(BM_Distance)->Range(16, 4096);

static void BM_MapEval(benchmark::State& state) {
    const auto G = build_gehman(parse_subshift("full"), static_cast<int>(state.range(0)));
    const DendriteMap f = shift_map(G);
    std::mt19937_64 rng(3);
    DPoint p = random_point(G.dendrite(), rng);
    for (auto _ : state) {
        p = f(p);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_MapEval)->Arg(8)->Arg(12);

static void BM_Decompose(benchmark::State& state) {
    const Dendrite X = random_dendrite(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(X, 0.25).cells.size());
}
BENCHMARK(BM_Decompose)->Arg(20)->Arg(50)->Arg(200);

static void BM_EntropyTent(benchmark::State& state) {
    auto X = std::make_shared<const Dendrite>(3, std::vector<Edge>{{0, 1, 0.5}, {1, 2, 0.5}});
    const DendriteMap f(X, {DPoint::at_vertex(0), DPoint::at_vertex(2), DPoint::at_vertex(0)});
    for (auto _ : state) benchmark::DoNotOptimize(entropy_estimate(f, 0.05, 8, 100).estimate);
}
BENCHMARK(BM_EntropyTent)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
