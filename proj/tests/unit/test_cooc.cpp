#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "sinr/cooc.hpp"
#include "sinr/error.hpp"

using namespace sinr;
using gen::random_sentences;

namespace {

TokenizedCorpus to_corpus(const oracle::Sentences &sentences) {
    TokenizedCorpus c;
    for (const auto &s : sentences) c.add_sentence(std::span<const std::string>(s), false);
    return c;
}

} // namespace

TEST(Corpus, ReadsSentencesAndFoldsAsciiCase) {
    std::istringstream in("The Cat sat\n\nthe cat\n");
    const auto c = read_corpus(in);
    EXPECT_EQ(c.sentence_count(), 3u);
    EXPECT_EQ(c.tokens.size(), 5u);
    EXPECT_EQ(c.types.size(), 3u);
    EXPECT_EQ(utf8_length("caf\xc3\xa9"), 4u);
}

TEST(Vocabulary, LengthAndCountFiltersWithExceptions) {
    oracle::Sentences s(1);
    for (int i = 0; i < 30; ++i) s[0].push_back("of");
    for (int i = 0; i < 25; ++i) s[0].push_back("cat");
    for (int i = 0; i < 19; ++i) s[0].push_back("dog");
    CorpusConfig cfg;
    const auto corpus = to_corpus(s);
    const auto plain = build_vocab(corpus, cfg);
    EXPECT_FALSE(plain.find("of"));
    EXPECT_FALSE(plain.find("dog"));
    ASSERT_TRUE(plain.find("cat"));
    const auto with = build_vocab(corpus, cfg, {"of"});
    ASSERT_TRUE(with.find("of"));
    EXPECT_EQ(*with.find("of"), 0u);
    EXPECT_EQ(with.count(0), 30u);
    EXPECT_EQ(with.total_count(), 55u);
}

TEST(Cooccurrence, WindowStaysInsideSentences) {
    const oracle::Sentences s{{"aaa", "bbb", "ccc"}, {"ccc", "aaa"}};
    CorpusConfig cfg;
    cfg.min_count = 1;
    cfg.window_size = 1;
    const auto corpus = to_corpus(s);
    const auto vocab = build_vocab(corpus, cfg);
    const auto acc = accumulate_cooc(corpus, vocab, cfg);
    const auto id = [&](const char *w) { return *vocab.find(w); };
    EXPECT_EQ(acc.count(id("aaa"), id("bbb")), 1u);
    EXPECT_EQ(acc.count(id("bbb"), id("ccc")), 1u);
    EXPECT_EQ(acc.count(id("aaa"), id("ccc")), 1u);
    EXPECT_EQ(acc.count(id("ccc"), id("aaa")), 1u);
    EXPECT_EQ(acc.total(), 3u);
}

TEST(Cooccurrence, FilteredTokensStillOccupyPositions) {
    const oracle::Sentences s{{"aaa", "xx", "bbb"}};
    CorpusConfig cfg;
    cfg.min_count = 1;
    cfg.window_size = 1;
    const auto corpus = to_corpus(s);
    const auto vocab = build_vocab(corpus, cfg);
    EXPECT_TRUE(accumulate_cooc(corpus, vocab, cfg).empty());
}

TEST(Cooccurrence, CountsMatchBruteForceForAnyJobCount) {
    std::mt19937_64 rng(40);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_sentences(rng, 80, 20);
        CorpusConfig cfg;
        cfg.min_count = 3;
        cfg.window_size = 1 + trial % 6;
        const auto corpus = to_corpus(s);
        const auto vocab = build_vocab(corpus, cfg);
        const auto expected_vocab = oracle::vocabulary(s, cfg.min_count, cfg.min_word_length);
        ASSERT_EQ(vocab.size(), expected_vocab.size());
        for (const auto &[w, c] : expected_vocab) EXPECT_EQ(vocab.count(*vocab.find(w)), c);

        const auto expected = oracle::cooccurrences(s, expected_vocab, cfg.window_size);
        const auto acc = accumulate_cooc(corpus, vocab, cfg, 1);
        EXPECT_EQ(acc, accumulate_cooc(corpus, vocab, cfg, 4));
        EXPECT_EQ(acc.pair_count(), expected.size());
        for (const auto &[pair, c] : expected) EXPECT_EQ(acc.count(*vocab.find(pair.first), *vocab.find(pair.second)), c);
    }
}

TEST(PmiFilter, ZeroPmiIsKept) {
    // cooc / T == occ_a occ_b / O^2  <=>  PMI == 0
    EXPECT_TRUE(pmi_keep(1, 2, 2, 16, 8));
    EXPECT_NEAR(pmi(1, 2, 2, 16, 8), 0.0, 1e-15);
    EXPECT_FALSE(pmi_keep(1, 2, 2, 17, 8));
    EXPECT_TRUE(pmi_keep(2, 2, 2, 17, 8));
}

TEST(PmiFilter, RareCooccurrenceOfFrequentWordsIsDropped) {
    EXPECT_FALSE(pmi_keep(1, 1'000'000, 1'000'000, 10'000'000, 20'000'000));
    EXPECT_TRUE(pmi_keep(1, 1, 1, 10'000'000, 20'000'000));
}

TEST(PmiFilter, NoOverflowOnLargeCounts) {
    const std::uint64_t big = 4'000'000'000ull;
    EXPECT_EQ(pmi_keep(big, big, big, big, big), oracle::pmi_nonnegative(big, big, big, big, big));
    EXPECT_EQ(pmi_keep(big - 1, big, big, big, big), oracle::pmi_nonnegative(big - 1, big, big, big, big));
}

TEST(PmiFilter, KeepDecisionsMatchExactEvaluation) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = random_sentences(rng, 100, 25);
        CorpusConfig cfg;
        cfg.min_count = 2;
        cfg.window_size = 3;
        const auto corpus = to_corpus(s);
        const auto vocab = build_vocab(corpus, cfg);
        const auto acc = accumulate_cooc(corpus, vocab, cfg);
        const auto cg = pmi_filter(acc, vocab);

        const auto ov = oracle::vocabulary(s, cfg.min_count, cfg.min_word_length);
        const auto oc = oracle::cooccurrences(s, ov, cfg.window_size);
        std::uint64_t occ_total = 0, sym_total = 0;
        for (const auto &[w, c] : ov) occ_total += c;
        for (const auto &[p, c] : oc) sym_total += 2 * c;
        std::map<std::pair<std::string, std::string>, std::uint64_t> kept;
        for (const auto &[p, c] : oc) {
            if (oracle::pmi_nonnegative(c, ov.at(p.first), ov.at(p.second), sym_total, occ_total)) kept[p] = c;
        }
        EXPECT_EQ(cg.kept, kept.size());
        EXPECT_EQ(cg.pairs, oc.size());

        const auto &g = cg.graph;
        std::size_t inside = 0;
        for (const auto &[p, c] : kept) {
            const auto a = g.labels().find(p.first), b = g.labels().find(p.second);
            if (!a || !b) continue;
            ++inside;
            EXPECT_DOUBLE_EQ(g.edge_weight(*a, *b), static_cast<double>(c));
        }
        EXPECT_EQ(g.edge_count(), inside);
        g.for_each_edge([&](NodeId a, NodeId b, double) {
            const auto &wa = g.labels().label(a), &wb = g.labels().label(b);
            EXPECT_TRUE(kept.count({std::min(wa, wb), std::max(wa, wb)}));
        });
    }
}
