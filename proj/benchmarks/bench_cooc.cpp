#include <benchmark/benchmark.h>

#include <random>

#include "generators.hpp"
#include "sinr/cooc.hpp"

using namespace sinr;

namespace {

TokenizedCorpus corpus_of(std::size_t sentences) {
    std::mt19937_64 rng(2);
    TokenizedCorpus c;
    for (const auto &s : gen::random_sentences(rng, sentences, 5000)) c.add_sentence(std::span<const std::string>(s), false);
    return c;
}

void BM_Cooccurrence(benchmark::State &state) {
    const auto corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    CorpusConfig cfg;
    cfg.min_count = 2;
    const auto vocab = build_vocab(corpus, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(accumulate_cooc(corpus, vocab, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.tokens.size()));
}

void BM_PmiFilter(benchmark::State &state) {
    const auto corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    CorpusConfig cfg;
    cfg.min_count = 2;
    const auto vocab = build_vocab(corpus, cfg);
    const auto acc = accumulate_cooc(corpus, vocab, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(pmi_filter(acc, vocab));
}

} // namespace

BENCHMARK(BM_Cooccurrence)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PmiFilter)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
