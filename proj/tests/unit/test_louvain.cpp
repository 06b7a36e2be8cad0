#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "sinr/community.hpp"
#include "sinr/error.hpp"

using namespace sinr;
using gen::two_cliques;

namespace {

// Ring of `count` cliques of size `k`, neighbouring cliques joined by one edge.
WeightedGraph ring_of_cliques(std::size_t count, std::size_t k) {
    GraphBuilder b(count * k);
    for (std::size_t c = 0; c < count; ++c) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                b.add_edge(static_cast<NodeId>(c * k + i), static_cast<NodeId>(c * k + j));
            }
        }
        b.add_edge(static_cast<NodeId>(c * k), static_cast<NodeId>(((c + 1) % count) * k + 1));
    }
    return b.build();
}

std::vector<std::uint32_t> assignment_of(const Partition &p) {
    return {p.assignment().begin(), p.assignment().end()};
}

} // namespace

TEST(Modularity, MatchesDenseFormula) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 30; ++trial) {
        const auto el = oracle::random_graph(rng, 20, 0.2, 3);
        std::uniform_int_distribution<std::uint32_t> pick(0, 3);
        std::vector<std::uint32_t> raw(el.n);
        for (auto &c : raw) c = pick(rng);
        const Partition p(raw);
        for (double gamma : {0.5, 1.0, 2.0}) {
            EXPECT_NEAR(modularity(oracle::to_graph(el), p, gamma),
                        oracle::modularity(oracle::adjacency(el), assignment_of(p), gamma), 1e-12);
        }
    }
}

TEST(Louvain, PlantedCliquesRecoveredForEverySeed) {
    const auto g = two_cliques(6);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        LouvainConfig cfg;
        cfg.seed = seed;
        const auto p = louvain(g, cfg);
        ASSERT_EQ(p.community_count(), 2u) << "seed " << seed;
        for (NodeId u = 0; u < 6; ++u) {
            EXPECT_EQ(p.community_of(u), p.community_of(0));
            EXPECT_EQ(p.community_of(u + 6), p.community_of(6));
        }
        EXPECT_NE(p.community_of(0), p.community_of(6));
    }
}

TEST(Louvain, LevelModularityNeverDecreases) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = oracle::to_graph(oracle::random_graph(rng, 60, 0.08, 3));
        LouvainConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto r = run_louvain(g, cfg);
        ASSERT_FALSE(r.level_modularity.empty());
        EXPECT_GE(r.level_modularity.front(), modularity(g, Partition::singletons(g.node_count())) - 1e-12);
        for (std::size_t i = 1; i < r.level_modularity.size(); ++i) {
            EXPECT_GE(r.level_modularity[i], r.level_modularity[i - 1] - 1e-12);
        }
        EXPECT_NEAR(r.level_modularity.back(), modularity(g, r.partition), 1e-9);
    }
}

TEST(Louvain, DeterministicForSeed) {
    std::mt19937_64 rng(12);
    const auto g = oracle::to_graph(oracle::random_graph(rng, 80, 0.06));
    LouvainConfig cfg;
    cfg.seed = 42;
    EXPECT_EQ(louvain(g, cfg), louvain(g, cfg));
}

TEST(Louvain, HigherResolutionSplitsRingOfCliques) {
    const auto g = ring_of_cliques(30, 5);
    LouvainConfig low, high;
    low.gamma = 0.05;
    // At gamma 1 the resolution limit merges neighbouring cliques (30 > sqrt(330)).
    high.gamma = 2.0;
    EXPECT_LT(louvain(g, low).community_count(), louvain(g, high).community_count());
    EXPECT_EQ(louvain(g, high).community_count(), 30u);
}

TEST(Louvain, RejectsInvalidGamma) {
    LouvainConfig cfg;
    cfg.gamma = 0.0;
    EXPECT_THROW(louvain(two_cliques(3), cfg), ValidationError);
}

TEST(Nmi, IdenticalUpToRelabelingIsOne) {
    const std::vector<std::uint32_t> a{0, 0, 1, 1, 2}, b{5, 5, 3, 3, 9};
    EXPECT_NEAR(nmi(a, b), 1.0, 1e-12);
}

TEST(Nmi, TrivialPartitions) {
    const std::vector<std::uint32_t> one{0, 0, 0, 0}, split{0, 0, 1, 1};
    EXPECT_DOUBLE_EQ(nmi(one, one), 1.0);
    EXPECT_DOUBLE_EQ(nmi(one, split), 0.0);
}

TEST(Nmi, MatchesContingencyOracleAndIsSymmetric) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::uint32_t> ka(1, 6), kb(1, 6);
        std::uniform_int_distribution<std::uint32_t> pa(0, ka(rng) - 1), pb(0, kb(rng) - 1);
        std::vector<std::uint32_t> a(50), b(50);
        for (auto &x : a) x = pa(rng);
        for (auto &x : b) x = pb(rng);
        const double v = nmi(a, b);
        EXPECT_NEAR(v, oracle::nmi(a, b), 1e-12);
        EXPECT_NEAR(v, nmi(b, a), 1e-12);
        EXPECT_GE(v, -1e-12);
        EXPECT_LE(v, 1.0 + 1e-12);
    }
}
