#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sinr/error.hpp"
#include "sinr/eval_word.hpp"

using namespace sinr;

namespace {

SparseEmbedding labeled(std::size_t cols, std::vector<SparseRow> rows, const std::vector<std::string> &words) {
    NodeLabelMap labels;
    for (const auto &w : words) labels.intern(w);
    return SparseEmbedding(cols, std::move(rows), std::move(labels));
}

SparseEmbedding random_model(std::mt19937_64 &rng, std::size_t n, std::size_t k) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SparseRow> rows(n);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) {
        for (DimensionId d = 0; d < k; ++d) {
            if (u(rng) < 0.3) rows[i].push_back({d, u(rng)});
        }
        if (rows[i].empty()) rows[i].push_back({0, 1.0});
        words.push_back("w" + std::to_string(i));
    }
    return labeled(k, std::move(rows), words);
}

// 1 - |A & B| / n over the top-n labels, from dense cosine rankings.
double varnn_oracle(const SparseEmbedding &a, const SparseEmbedding &b, const std::string &word, std::size_t n) {
    auto ranked = [&](const SparseEmbedding &e) {
        const NodeId q = *e.find(word);
        std::vector<std::pair<double, NodeId>> all;
        for (NodeId v = 0; v < e.rows(); ++v) {
            if (v != q) all.emplace_back(oracle::cosine(e.dense_row(q), e.dense_row(v)), v);
        }
        std::sort(all.begin(), all.end(), [](const auto &x, const auto &y) {
            return x.first != y.first ? x.first > y.first : x.second < y.second;
        });
        std::set<std::string> top;
        for (std::size_t i = 0; i < n; ++i) top.insert(e.labels().label(all[i].second));
        return top;
    };
    const auto ta = ranked(a), tb = ranked(b);
    std::size_t common = 0;
    for (const auto &w : ta) common += tb.count(w);
    return 1.0 - static_cast<double>(common) / static_cast<double>(n);
}

} // namespace

TEST(SimilarityLoader, MenStripsTagsAndDropsDuplicates) {
    std::istringstream in("sun-n sunlight-n 50\nsunlight-n sun-n 10\nrun-v Walk-v 3.5\n");
    const auto ds = read_similarity_dataset(in, SimilarityFormat::men, "men");
    ASSERT_EQ(ds.pairs.size(), 2u);
    EXPECT_EQ(ds.pairs[0].first, "sun");
    EXPECT_EQ(ds.pairs[0].score, 50.0);
    EXPECT_EQ(ds.pairs[1].second, "walk");
}

TEST(SimilarityLoader, Ws353HeaderAndScws) {
    std::istringstream ws("Word 1,Word 2,Human (mean)\nlove,sex,6.77\ntiger,cat,7.35\n");
    EXPECT_EQ(read_similarity_dataset(ws, SimilarityFormat::ws353, "ws").pairs.size(), 2u);
    std::istringstream scws("1\tBrazil\tn\tnut\tn\tctx one\tctx two\t3.1\t1\t2\n");
    const auto s = read_similarity_dataset(scws, SimilarityFormat::scws, "scws");
    ASSERT_EQ(s.pairs.size(), 1u);
    EXPECT_EQ(s.pairs[0].first, "brazil");
    EXPECT_DOUBLE_EQ(s.pairs[0].score, 3.1);
    std::istringstream bad("a b notanumber\n");
    EXPECT_THROW(read_similarity_dataset(bad, SimilarityFormat::tsv, "x"), ParseError);
}

TEST(WordSimilarity, DropsMissingWordsAndMatchesSpearman) {
    const auto e = labeled(2, {{{0, 1.0}}, {{0, 1.0}, {1, 1.0}}, {{1, 1.0}}, {{0, 0.1}, {1, 1.0}}},
                           {"aa", "bb", "cc", "dd"});
    SimilarityDataset ds{"t", {{"aa", "bb", 8}, {"aa", "cc", 1}, {"cc", "dd", 9}, {"aa", "zz", 5}}};
    const auto r = word_similarity(e, ds);
    EXPECT_EQ(r.retained, 3u);
    EXPECT_DOUBLE_EQ(r.coverage, 0.75);
    EXPECT_NEAR(r.spearman, 1.0, 1e-12);
    SimilarityDataset tiny{"t", {{"aa", "bb", 1}}};
    EXPECT_THROW(word_similarity(e, tiny), ValidationError);
}

TEST(Categorization, SeparatedCategoriesArePure) {
    std::vector<SparseRow> rows;
    std::vector<std::string> words;
    CategorizationDataset ds{"toy", {}};
    for (std::uint32_t c = 0; c < 3; ++c) {
        for (int i = 0; i < 5; ++i) {
            rows.push_back({{c, 1.0 + i * 0.1}, {3, 0.05}});
            words.push_back("c" + std::to_string(c) + "_" + std::to_string(i));
            ds.items.emplace_back(words.back(), "cat" + std::to_string(c));
        }
    }
    ds.items.emplace_back("missing", "cat0");
    const auto r = concept_categorization(labeled(4, rows, words), ds, 5, 1);
    EXPECT_DOUBLE_EQ(r.purity, 1.0);
    EXPECT_DOUBLE_EQ(r.agglomerative_purity, 1.0);
    EXPECT_NEAR(r.coverage, 15.0 / 16.0, 1e-12);
}

TEST(Varnn, IdentityDisjointSymmetryAndRange) {
    std::mt19937_64 rng(70);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_model(rng, 40, 8);
        const auto b = random_model(rng, 40, 8);
        for (const std::string w : {"w0", "w7", "w13"}) {
            EXPECT_EQ(varnn(a, a, w, 10), 0.0);
            const double ab = varnn(a, b, w, 10);
            EXPECT_EQ(ab, varnn(b, a, w, 10));
            EXPECT_GE(ab, 0.0);
            EXPECT_LE(ab, 1.0);
        }
    }
    // Two models over the same words whose neighbourhoods of "q" are disjoint.
    const std::vector<std::string> words{"q", "x1", "x2", "y1", "y2"};
    const auto m1 = labeled(2, {{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}}, words);
    const auto m2 = labeled(2, {{{1, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}}, words);
    EXPECT_EQ(varnn(m1, m2, "q", 2), 1.0);
}

TEST(Varnn, MatchesDenseRankingOracle) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_model(rng, 50, 6), b = random_model(rng, 50, 6);
        for (const std::string w : {"w1", "w20", "w49"}) {
            for (std::size_t n : {1u, 5u, 10u}) EXPECT_DOUBLE_EQ(varnn(a, b, w, n), varnn_oracle(a, b, w, n));
        }
    }
}

TEST(Varnn, MeanOverModelsAndWords) {
    std::mt19937_64 rng(72);
    const auto a = random_model(rng, 30, 6), b = random_model(rng, 30, 6), c = random_model(rng, 30, 6);
    const std::vector<const SparseEmbedding *> models{&a, &b, &c};
    const auto words = shared_vocabulary(models);
    EXPECT_EQ(words.size(), 30u);
    const auto means = mean_varnn(models, {3, 10}, words, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t n = i == 0 ? 3 : 10;
        double total = 0.0;
        for (const auto &w : words) total += varnn(a, b, w, n) + varnn(a, c, w, n) + varnn(b, c, w, n);
        EXPECT_NEAR(means[i], total / (3.0 * static_cast<double>(words.size())), 1e-12);
    }
    EXPECT_THROW(mean_varnn(models, {30}, words), ValidationError);
}

TEST(Stability, IdenticalRunsOnCliquesGiveOne) {
    GraphBuilder b(12);
    for (NodeId side = 0; side < 2; ++side) {
        for (NodeId i = 0; i < 6; ++i) {
            for (NodeId j = i + 1; j < 6; ++j) b.add_edge(side * 6 + i, side * 6 + j);
        }
    }
    b.add_edge(0, 6);
    const auto values = community_stability(b.build(), {}, 4, 3, 2);
    EXPECT_EQ(values.size(), 6u);
    for (double v : values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(SampleWords, SubsetWithoutReplacement) {
    std::vector<std::string> words;
    for (int i = 0; i < 100; ++i) words.push_back(std::to_string(i));
    const auto s = sample_words(words, 10, 4);
    EXPECT_EQ(s.size(), 10u);
    EXPECT_EQ(std::set<std::string>(s.begin(), s.end()).size(), 10u);
    EXPECT_EQ(s, sample_words(words, 10, 4));
    EXPECT_EQ(sample_words(words, 500, 4).size(), 100u);
}
