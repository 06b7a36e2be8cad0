#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sinr/error.hpp"
#include "sinr/graph.hpp"
#include "sinr/graph_algorithms.hpp"
#include "sinr/graph_io.hpp"
#include "sinr/partition.hpp"

using namespace sinr;

TEST(Graph, BuilderMergesDuplicatesAndDropsLoops) {
    GraphBuilder b;
    b.add_edge("a", "b", 1.0);
    b.add_edge("b", "a", 2.0);
    b.add_edge("a", "a", 5.0);
    b.add_edge("b", "c", 1.0);
    const auto g = b.build();
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_DOUBLE_EQ(g.edge_weight(0, 1), 3.0);
    EXPECT_DOUBLE_EQ(g.weighted_degree(1), 4.0);
    EXPECT_EQ(g.degree(1), 2u);
    EXPECT_DOUBLE_EQ(g.total_weight(), 4.0);
    EXPECT_FALSE(g.has_edge(0, 0));
}

TEST(Graph, RejectsNonPositiveWeights) {
    GraphBuilder b(2);
    EXPECT_THROW(b.add_edge(0, 1, -1.0), ValidationError);
}

TEST(Graph, AdjacencyIsSymmetricAndSorted) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto el = oracle::random_graph(rng, 30, 0.2, 4);
        const auto g = oracle::to_graph(el);
        EXPECT_EQ(oracle::adjacency(g), oracle::adjacency(el));
        for (NodeId u = 0; u < g.node_count(); ++u) {
            const auto nb = g.neighbors(u);
            EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
        }
    }
}

TEST(GraphIo, EdgeListParsesCommentsAndWeights) {
    std::istringstream in("# header\n% other\nx\ty\t2.5\ny z\n\nx\tz\t1\n");
    const auto g = read_edge_list(in, true);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_DOUBLE_EQ(g.edge_weight(*g.labels().find("x"), *g.labels().find("y")), 2.5);
    std::istringstream unweighted("x\ty\t2.5\n");
    EXPECT_DOUBLE_EQ(read_edge_list(unweighted, false).edge_weight(0, 1), 1.0);
}

TEST(GraphIo, MalformedLineReportsLineNumber) {
    std::istringstream in("a\tb\nlonely\n");
    try {
        read_edge_list(in, false, "t.tsv");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(GraphIo, TextAndBinaryRoundTrip) {
    std::mt19937_64 rng(2);
    const auto g = oracle::to_graph(oracle::random_graph(rng, 40, 0.1, 3));
    std::stringstream text;
    write_edge_list(g, text);
    // Text ids follow first appearance, so compare through labels.
    const auto back = read_edge_list(text, true);
    ASSERT_EQ(back.node_count(), g.node_count());
    ASSERT_EQ(back.edge_count(), g.edge_count());
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
        const NodeId bu = *back.labels().find(g.labels().label(u));
        const NodeId bv = *back.labels().find(g.labels().label(v));
        EXPECT_EQ(back.edge_weight(bu, bv), w);
    });
    std::stringstream bin;
    write_graph_binary(g, bin);
    EXPECT_EQ(read_graph_binary(bin), g);
}

TEST(GraphAlgorithms, LargestComponentPicksBiggest) {
    GraphBuilder b(7);
    b.add_edge(0, 1);
    b.add_edge(2, 3);
    b.add_edge(3, 4);
    b.add_edge(4, 5);
    b.add_edge(5, 6);
    const auto g = b.build();
    EXPECT_EQ(connected_components(g).count, 2u);
    const auto lcc = largest_connected_component(g);
    EXPECT_EQ(lcc.graph.node_count(), 5u);
    EXPECT_EQ(lcc.new_to_old.front(), 2u);
    EXPECT_EQ(lcc.old_to_new[0], kInvalidNode);
}

TEST(GraphAlgorithms, ClusteringCoefficientMatchesTriangleCount) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto el = oracle::random_graph(rng, 25, 0.25, 3);
        const auto g = oracle::to_graph(el);
        const auto expected = oracle::clustering(oracle::adjacency(el));
        const auto got = clustering_coefficients(g);
        for (std::size_t u = 0; u < expected.size(); ++u) EXPECT_NEAR(got[u], expected[u], 1e-12);
    }
}

TEST(GraphAlgorithms, PageRankMatchesLinearSolve) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto el = oracle::random_graph(rng, 30, 0.15, 5);
        const auto expected = oracle::pagerank(oracle::adjacency(el), 0.85);
        const auto got = pagerank(oracle::to_graph(el));
        double sum = 0.0;
        for (std::size_t u = 0; u < got.size(); ++u) {
            EXPECT_NEAR(got[u], expected[u], 1e-9);
            sum += got[u];
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Partition, RenumbersByFirstAppearance) {
    const std::vector<std::uint32_t> raw{7, 7, 3, 9, 3};
    const Partition p(raw);
    EXPECT_EQ(p.community_count(), 3u);
    EXPECT_EQ(p.community_of(0), 0u);
    EXPECT_EQ(p.community_of(2), 1u);
    EXPECT_EQ(p.community_size(1), 2u);
}

TEST(Partition, TextRoundTripAndUnknownLabel) {
    const auto labels = NodeLabelMap::identity(4);
    const std::vector<std::uint32_t> raw{0, 0, 1, 1};
    const Partition p(raw);
    std::stringstream s;
    write_partition(p, labels, s);
    EXPECT_EQ(read_partition(s, labels), p);
    std::istringstream bad("0\t0\n1\t0\n2\t1\n9\t1\n");
    EXPECT_THROW(read_partition(bad, labels), Error);
}
