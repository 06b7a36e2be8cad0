#include <benchmark/benchmark.h>

#include <random>

#include "generators.hpp"
#include "sinr/community.hpp"
#include "sinr/embed.hpp"

using namespace sinr;

namespace {

WeightedGraph graph_of(std::int64_t n) {
    std::mt19937_64 rng(1);
    return gen::sparse_community_graph(rng, static_cast<std::size_t>(n), 10);
}

void BM_Louvain(benchmark::State &state) {
    const auto g = graph_of(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(louvain(g));
    state.SetComplexityN(static_cast<std::int64_t>(g.edge_count()));
    state.counters["edges"] = static_cast<double>(g.edge_count());
}

void BM_NodeRecall(benchmark::State &state) {
    const auto g = graph_of(state.range(0));
    const auto p = louvain(g);
    for (auto _ : state) benchmark::DoNotOptimize(sinr_nr(g, p));
    state.SetComplexityN(static_cast<std::int64_t>(g.edge_count()));
}

void BM_MatrixFactorizationEpoch(benchmark::State &state) {
    const auto g = graph_of(state.range(0));
    const auto p = louvain(g);
    MfConfig cfg;
    cfg.epochs = 10;
    cfg.max_nodes = g.node_count();
    for (auto _ : state) benchmark::DoNotOptimize(sinr_mf(g, p, cfg));
}

} // namespace

BENCHMARK(BM_Louvain)->RangeMultiplier(2)->Range(10000, 160000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_NodeRecall)->RangeMultiplier(2)->Range(10000, 160000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_MatrixFactorizationEpoch)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
