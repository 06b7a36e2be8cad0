#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "sinr/error.hpp"
#include "sinr/interpret.hpp"

using namespace sinr;
using gen::labeled;
using gen::random_sparse;

namespace {

std::vector<double> column(const SparseEmbedding &e, DimensionId d) {
    std::vector<double> c(e.rows());
    for (NodeId u = 0; u < e.rows(); ++u) c[u] = e.value(u, d);
    return c;
}

// Independent check of both percentile clauses and the top-3 rule.
bool oracle_accepts(const SparseEmbedding &e, const IntrusionTask &t) {
    const auto col = column(e, t.dim);
    std::vector<std::pair<double, NodeId>> ranked;
    for (NodeId u = 0; u < e.rows(); ++u) ranked.emplace_back(-col[u], u);
    std::sort(ranked.begin(), ranked.end());
    for (std::size_t j = 0; j < 3; ++j) {
        if (ranked[j].first >= 0.0 || e.labels().label(ranked[j].second) != t.top[j]) return false;
    }
    const NodeId w = *e.find(t.intruder);
    if (!oracle::bottom_30(col, col[w])) return false;
    for (DimensionId d = 0; d < e.cols(); ++d) {
        if (d != t.dim && oracle::top_10(column(e, d), e.value(w, d))) return true;
    }
    return false;
}

} // namespace

TEST(TopWords, OneHotModelListsCommunityMembers) {
    const auto e = labeled(2, {{{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{0, 1.0}}});
    const auto d = top_words(e, 0, 3);
    ASSERT_EQ(d.words.size(), 3u);
    EXPECT_EQ(d.words[0].first, "w0");
    EXPECT_EQ(d.words[1].first, "w1");
    EXPECT_EQ(d.words[2].first, "w3");
    EXPECT_FALSE(d.short_list);
    EXPECT_EQ(d.member_count, 3u);
}

TEST(TopWords, ShortListIsFlagged) {
    const auto e = labeled(2, {{{0, 1.0}}, {{1, 1.0}}});
    const auto d = top_words(e, 1, 5);
    EXPECT_TRUE(d.short_list);
    EXPECT_EQ(d.words.size(), 1u);
    EXPECT_THROW(top_words(e, 2, 1), ValidationError);
}

TEST(TopWords, MatchesFullColumnSort) {
    std::mt19937_64 rng(80);
    const auto e = random_sparse(rng, 200, 10);
    for (DimensionId d = 0; d < 10; ++d) {
        auto col = column(e, d);
        std::vector<std::pair<double, NodeId>> ranked;
        for (NodeId u = 0; u < e.rows(); ++u) {
            if (col[u] > 0.0) ranked.emplace_back(-col[u], u);
        }
        std::sort(ranked.begin(), ranked.end());
        const auto got = top_words(e, d, 8);
        for (std::size_t i = 0; i < got.words.size(); ++i) {
            EXPECT_EQ(got.words[i].first, e.labels().label(ranked[i].second));
            EXPECT_EQ(got.words[i].second, -ranked[i].first);
        }
    }
}

TEST(Intrusion, ToyIntruderSatisfiesBothClauses) {
    // w3 tops dimension 1 and is absent from dimension 0.
    const auto e = labeled(2, {{{0, 0.9}}, {{0, 0.8}}, {{0, 0.7}}, {{1, 1.0}}});
    const ColumnPercentiles pct(e);
    EXPECT_TRUE(pct.in_bottom_30(0, 0.0));
    EXPECT_TRUE(pct.in_top_10(1, 1.0));
    IntrusionTask t;
    t.dim = 0;
    t.top = {"w0", "w1", "w2"};
    t.intruder = "w3";
    t.shown = {"w3", "w1", "w0", "w2"};
    EXPECT_EQ(validate_intrusion_task(e, t), "");
    EXPECT_TRUE(oracle_accepts(e, t));
}

TEST(Intrusion, TooManyTasksIsAnError) {
    const auto e = labeled(2, {{{0, 0.9}}, {{0, 0.8}}, {{0, 0.7}}, {{1, 1.0}}});
    EXPECT_THROW(sample_intrusion_tasks(e, 3, 0), ValidationError);
}

TEST(Intrusion, GeneratedTasksPassIndependentValidator) {
    std::mt19937_64 rng(81);
    const auto e = random_sparse(rng, 400, 60);
    const auto tasks = sample_intrusion_tasks(e, 40, 7, "toy");
    ASSERT_EQ(tasks.size(), 40u);
    std::set<DimensionId> dims;
    for (const auto &t : tasks) {
        EXPECT_TRUE(oracle_accepts(e, t)) << "task " << t.id;
        EXPECT_EQ(validate_intrusion_task(e, t), "");
        std::set<std::string> shown(t.shown.begin(), t.shown.end());
        EXPECT_EQ(shown.size(), 4u);
        EXPECT_TRUE(shown.count(t.intruder));
        dims.insert(t.dim);
    }
    EXPECT_EQ(dims.size(), 40u);
    const auto again = sample_intrusion_tasks(e, 40, 7, "toy");
    for (std::size_t i = 0; i < tasks.size(); ++i) EXPECT_EQ(tasks[i].shown, again[i].shown);
}

TEST(Intrusion, ExportKeepsKeySeparate) {
    std::mt19937_64 rng(82);
    const auto e = random_sparse(rng, 300, 30);
    const auto tasks = sample_intrusion_tasks(e, 5, 1, "m");
    std::ostringstream annotator, key;
    write_intrusion_tasks(annotator, tasks);
    write_intrusion_key(key, tasks);
    EXPECT_EQ(annotator.str().find("intruder"), std::string::npos);
    std::istringstream key_in(key.str());
    const auto parsed = read_intrusion_key(key_in);
    ASSERT_EQ(parsed.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(parsed[i].intruder, tasks[i].intruder);
        EXPECT_EQ(parsed[i].dim, tasks[i].dim);
    }
}

TEST(StrongestDimensions, MatchesDenseArgsort) {
    std::mt19937_64 rng(83);
    const auto e = random_sparse(rng, 50, 8);
    for (NodeId u = 0; u < e.rows(); ++u) {
        auto row = e.dense_row(u);
        std::vector<std::pair<double, DimensionId>> ranked;
        for (DimensionId d = 0; d < row.size(); ++d) {
            if (row[d] > 0.0) ranked.emplace_back(-row[d], d);
        }
        std::sort(ranked.begin(), ranked.end());
        const auto got = strongest_dimensions(e, e.labels().label(u), 2);
        EXPECT_EQ(got.short_list, ranked.size() < 2);
        for (std::size_t i = 0; i < got.dims.size(); ++i) EXPECT_EQ(got.dims[i].dim, ranked[i].second);
    }
    const auto one_hot = labeled(3, {{{2, 1.0}}});
    const auto r = strongest_dimensions(one_hot, "w0", 3);
    EXPECT_EQ(r.dims.size(), 1u);
    EXPECT_TRUE(r.short_list);
    EXPECT_THROW(strongest_dimensions(one_hot, "nope", 1), ValidationError);
}

TEST(SharedDimensions, MatchesSupportIntersections) {
    std::mt19937_64 rng(84);
    const auto e = random_sparse(rng, 20, 6);
    const std::vector<std::string> words{"w0", "w1", "w2", "w3"};
    const auto shared = shared_dimensions(e, words);
    std::vector<DimensionId> expected;
    for (DimensionId d = 0; d < 6; ++d) {
        int hits = 0;
        for (int i = 0; i < 4; ++i) hits += e.value(static_cast<NodeId>(i), d) > 0.0;
        if (hits >= 2) expected.push_back(d);
    }
    EXPECT_EQ(shared.dims, expected);

    const auto disjoint = labeled(2, {{{0, 1.0}}, {{1, 1.0}}});
    EXPECT_TRUE(shared_dimensions(disjoint, {"w0", "w1"}).dims.empty());
    const auto same = labeled(3, {{{0, 1.0}, {2, 0.5}}, {{0, 1.0}, {2, 0.5}}});
    EXPECT_EQ(shared_dimensions(same, {"w0", "w1"}).dims, (std::vector<DimensionId>{0, 2}));
    try {
        shared_dimensions(same, {"w0", "x", "y"});
        FAIL();
    } catch (const ValidationError &err) {
        EXPECT_NE(std::string(err.what()).find("x, y"), std::string::npos);
    }
    std::ostringstream grid;
    write_shared_grid(grid, shared_dimensions(same, {"w0", "w1"}));
    EXPECT_EQ(grid.str(), "word\tdim0:w0,w1\tdim2:w0,w1\nw0\t1\t1\nw1\t1\t1\n");
}

TEST(Annotations, OutcomesAgreementAndKappa) {
    const std::vector<IntrusionKeyEntry> key{{0, 3, "x"}, {1, 4, "y"}};
    std::istringstream in("task_id\tannotator\tdecision\twords\n"
                          "0\ta\t+\tx\n0\tb\t+\tx\n0\tc\t+-\tx,q\n"
                          "1\ta\t-\t\n1\tb\t+\tq\n1\tc\t+-\tq,r\n");
    const auto ann = read_annotations(in);
    ASSERT_EQ(ann.size(), 6u);
    const auto s = score_annotations(key, ann);
    EXPECT_EQ(s.counts[static_cast<std::size_t>(Outcome::found)], 2u);
    EXPECT_EQ(s.counts[static_cast<std::size_t>(Outcome::hesitated_found)], 1u);
    EXPECT_EQ(s.counts[static_cast<std::size_t>(Outcome::coherent)], 1u);
    EXPECT_EQ(s.counts[static_cast<std::size_t>(Outcome::wrong)], 1u);
    EXPECT_EQ(s.counts[static_cast<std::size_t>(Outcome::hesitated_wrong)], 1u);
    EXPECT_DOUBLE_EQ(s.agree_two, 0.5);
    EXPECT_DOUBLE_EQ(s.agree_all, 0.0);
    std::istringstream bad("0\ta\t+\tx,y\n");
    EXPECT_THROW(read_annotations(bad), ParseError);
}

TEST(Annotations, FleissKappaTextbookExample) {
    // Ten subjects, fourteen raters, five categories; kappa = 0.210.
    const std::vector<std::vector<std::size_t>> table{
        {0, 0, 0, 0, 14}, {0, 2, 6, 4, 2}, {0, 0, 3, 5, 6}, {0, 3, 9, 2, 0}, {2, 2, 8, 1, 1},
        {7, 7, 0, 0, 0},  {3, 2, 6, 3, 0}, {2, 5, 3, 2, 2}, {6, 5, 2, 1, 0}, {0, 2, 2, 3, 7}};
    EXPECT_NEAR(fleiss_kappa(table), 0.210, 0.0005);
    EXPECT_DOUBLE_EQ(fleiss_kappa({{3, 0}, {0, 3}}), 1.0);
}
