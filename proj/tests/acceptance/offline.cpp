#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "generators.hpp"
#include "harness.hpp"
#include "oracles.hpp"
#include "sinr/community.hpp"
#include "sinr/cooc.hpp"
#include "sinr/embed.hpp"
#include "sinr/eval_word.hpp"
#include "sinr/interpret.hpp"
#include "sinr/stats.hpp"

namespace acceptance {

using namespace sinr;

namespace {

constexpr double kExampleTolerance = 0.01;
constexpr double kMaxDoublingRatio = 3.0;
constexpr std::size_t kNrGraphs = 1000;
constexpr std::size_t kPmiCorpora = 300;
constexpr std::size_t kVarnnPairs = 200;
constexpr std::size_t kSpearmanTrials = 1000;
constexpr std::size_t kLouvainGraphs = 100;
constexpr std::size_t kCliqueSeeds = 100;
constexpr std::size_t kMfGraphs = 50;
constexpr std::size_t kMfWindow = 100;
constexpr double kMfWindowSlack = 1.05;
constexpr double kMfToyLoss = 1e-4;
constexpr std::size_t kIntrusionTasks = 1000;

Outcome bridge_example() {
    const auto e = sinr_nr(gen::bridge_example_graph(), gen::bridge_example_partition());
    const std::vector<std::pair<NodeId, std::array<double, 2>>> expected{
        {0, {1.0, 0.0}}, {3, {0.75, 0.25}}, {4, {1.0 / 3.0, 2.0 / 3.0}}};
    double worst = 0.0;
    for (const auto &[u, row] : expected) {
        for (DimensionId c = 0; c < 2; ++c) worst = std::max(worst, std::abs(e.value(u, c) - row[c]));
    }
    return pass_if(worst <= kExampleTolerance, "row 3 = [" + fmt(e.value(3, 0), 2) + ", " + fmt(e.value(3, 1), 2) +
                                                "], row 4 = [" + fmt(e.value(4, 0), 2) + ", " +
                                                fmt(e.value(4, 1), 2) + "], max error " + fmt(worst, 6));
}

double embed_time(const WeightedGraph &g) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        best = std::min(best, seconds([&] { (void)sinr_nr(g, louvain(g)); }));
    }
    return best;
}

Outcome synthetic_scaling() {
    std::mt19937_64 rng(8);
    const auto small = gen::sparse_community_graph(rng, 50000, 10);
    const auto large = gen::sparse_community_graph(rng, 100000, 10);
    const double t1 = embed_time(small), t2 = embed_time(large);
    const double edge_ratio = static_cast<double>(large.edge_count()) / static_cast<double>(small.edge_count());
    const double ratio = t2 / t1;
    return pass_if(ratio <= kMaxDoublingRatio, "m " + std::to_string(small.edge_count()) + " -> " +
                                                   std::to_string(large.edge_count()) + " (x" + fmt(edge_ratio, 2) +
                                                   "), time " + fmt(t1) + " s -> " + fmt(t2) + " s (x" +
                                                   fmt(ratio, 2) + ", limit x" + fmt(kMaxDoublingRatio, 1) + ")");
}

Outcome nr_invariants() {
    std::mt19937_64 rng(10);
    std::size_t mismatches = 0, bad_rows = 0, nondeterministic = 0;
    for (std::size_t trial = 0; trial < kNrGraphs; ++trial) {
        const auto el = oracle::random_graph(rng, 2 + trial % 80, 0.15, 4);
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(trial % 8));
        std::vector<std::uint32_t> raw(el.n);
        for (auto &c : raw) c = pick(rng);
        const Partition p(raw);
        const std::vector<std::uint32_t> comm(p.assignment().begin(), p.assignment().end());
        const auto a = oracle::adjacency(el);
        const auto expected = oracle::node_recall(a, comm, p.community_count());
        const auto g = oracle::to_graph(el);
        const auto e = sinr_nr(g, p);
        if (!(e == sinr_nr(g, p))) ++nondeterministic;
        for (NodeId u = 0; u < el.n; ++u) {
            std::set<std::uint32_t> neighbour_communities;
            for (NodeId v = 0; v < el.n; ++v) {
                if (a[u][v] > 0.0) neighbour_communities.insert(comm[v]);
            }
            double sum = 0.0;
            bool row_ok = e.row(u).size() == neighbour_communities.size();
            for (const auto &entry : e.row(u)) {
                row_ok = row_ok && entry.value > 0.0 && neighbour_communities.count(entry.dim);
                sum += entry.value;
            }
            if (!row_ok || std::abs(sum - 1.0) > 1e-12) ++bad_rows;
            for (DimensionId c = 0; c < p.community_count(); ++c) mismatches += e.value(u, c) != expected[u][c];
        }
    }
    return pass_if(mismatches == 0 && bad_rows == 0 && nondeterministic == 0,
                   std::to_string(kNrGraphs) + " graphs; " + std::to_string(mismatches) + " cells differ from oracle, " +
                       std::to_string(bad_rows) + " rows break stochasticity/support, " +
                       std::to_string(nondeterministic) + " nondeterministic");
}

Outcome pmi_filter_decisions() {
    std::mt19937_64 rng(11);
    std::size_t decisions = 0, disagreements = 0, kept = 0;
    for (std::size_t trial = 0; trial < kPmiCorpora; ++trial) {
        const auto s = gen::random_sentences(rng, 30 + trial % 120, 10 + trial % 30);
        CorpusConfig cfg;
        cfg.min_count = 1 + trial % 3;
        cfg.window_size = 1 + trial % 6;
        cfg.min_word_length = 1 + trial % 3;
        TokenizedCorpus corpus;
        for (const auto &sentence : s) corpus.add_sentence(std::span<const std::string>(sentence), false);
        const auto ov = oracle::vocabulary(s, cfg.min_count, cfg.min_word_length);
        const auto oc = oracle::cooccurrences(s, ov, cfg.window_size);
        if (oc.empty()) continue;
        const auto vocab = build_vocab(corpus, cfg);
        const auto acc = accumulate_cooc(corpus, vocab, cfg);
        std::uint64_t occ_total = 0, sym_total = 0;
        for (const auto &[w, c] : ov) occ_total += c;
        for (const auto &[p, c] : oc) sym_total += 2 * c;
        std::size_t kept_here = 0;
        for (const auto &[p, c] : oc) {
            const auto a = *vocab.find(p.first), b = *vocab.find(p.second);
            const bool expected = oracle::pmi_nonnegative(c, ov.at(p.first), ov.at(p.second), sym_total, occ_total);
            const bool got = pmi_keep(acc.count(a, b), vocab.count(a), vocab.count(b), 2 * acc.total(),
                                      vocab.total_count());
            ++decisions;
            kept_here += expected;
            disagreements += expected != got;
        }
        kept += kept_here;
        if (kept_here > 0) disagreements += pmi_filter(acc, vocab).kept != kept_here;
    }
    // cooc / T == occ_a occ_b / O^2 exactly, so PMI is zero and the pair stays.
    const bool boundary = pmi_keep(1, 2, 2, 16, 8) && oracle::pmi_nonnegative(1, 2, 2, 16, 8);
    return pass_if(disagreements == 0 && boundary && kept > 0 && kept < decisions,
                   std::to_string(decisions) + " pair decisions (" + std::to_string(kept) + " kept), " +
                       std::to_string(disagreements) + " disagree; zero-PMI boundary " +
                       (boundary ? "kept" : "dropped"));
}

Outcome varnn_and_spearman() {
    std::mt19937_64 rng(12);
    std::size_t violations = 0;
    for (std::size_t trial = 0; trial < kVarnnPairs; ++trial) {
        const auto a = gen::random_model(rng, 40, 8), b = gen::random_model(rng, 40, 8);
        for (const std::string w : {"w0", "w11", "w39"}) {
            for (std::size_t n : {1u, 5u, 20u}) {
                const double ab = varnn(a, b, w, n);
                violations += varnn(a, a, w, n) != 0.0;
                violations += ab != varnn(b, a, w, n);
                violations += ab < 0.0 || ab > 1.0;
            }
        }
    }
    // Disjoint neighbourhoods of "w0": it sits with w1, w2 in one model and
    // with w3, w4 in the other.
    const auto m1 = gen::labeled(2, {{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}});
    const auto m2 = gen::labeled(2, {{{1, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}});
    const bool disjoint = varnn(m1, m2, "w0", 2) == 1.0;

    std::normal_distribution<double> noise(0.0, 1.0);
    std::size_t spearman_violations = 0;
    for (std::size_t trial = 0; trial < kSpearmanTrials; ++trial) {
        const std::size_t n = 5 + trial % 60;
        std::vector<double> x(n), y(n), fx(n), gy(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::round(noise(rng) * 3.0) / 3.0;
            y[i] = x[i] + noise(rng);
            fx[i] = std::exp(x[i]);
            gy[i] = 2.0 * y[i] * y[i] * y[i] - 1.0;
        }
        spearman_violations += std::abs(spearman(fx, gy) - spearman(x, y)) > 1e-12;
    }
    return pass_if(violations == 0 && disjoint && spearman_violations == 0,
                   std::to_string(kVarnnPairs) + " model pairs, " + std::to_string(violations) +
                       " identity/symmetry/range violations, disjoint -> " + (disjoint ? "1" : "not 1") + "; " +
                       std::to_string(kSpearmanTrials) + " monotone transforms, " +
                       std::to_string(spearman_violations) + " change Spearman");
}

Outcome louvain_properties() {
    std::mt19937_64 rng(13);
    std::size_t decreases = 0;
    for (std::size_t trial = 0; trial < kLouvainGraphs; ++trial) {
        const auto g = oracle::to_graph(oracle::random_graph(rng, 20 + trial * 3, 0.05, 3));
        LouvainConfig cfg;
        cfg.seed = trial;
        const auto r = run_louvain(g, cfg);
        double previous = modularity(g, Partition::singletons(g.node_count()));
        for (double q : r.level_modularity) {
            decreases += q < previous - 1e-12;
            previous = q;
        }
    }
    const auto cliques = gen::two_cliques(8);
    std::vector<std::uint32_t> planted(16);
    for (std::size_t u = 8; u < 16; ++u) planted[u] = 1;
    std::size_t recovered = 0;
    for (std::size_t seed = 0; seed < kCliqueSeeds; ++seed) {
        LouvainConfig cfg;
        cfg.seed = seed;
        const auto p = louvain(cliques, cfg);
        recovered += p.community_count() == 2 && nmi(p, Partition(planted)) == 1.0;
    }
    return pass_if(decreases == 0 && recovered == kCliqueSeeds,
                   std::to_string(kLouvainGraphs) + " graphs, " + std::to_string(decreases) +
                       " modularity decreases; planted cliques recovered " + std::to_string(recovered) + "/" +
                       std::to_string(kCliqueSeeds));
}

Outcome mf_convergence() {
    std::mt19937_64 rng(14);
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t trial = 0; trial < kMfGraphs; ++trial) {
        const std::size_t n = 10 + (trial * 37) % 91;
        const auto g = oracle::to_graph(oracle::random_graph(rng, n, 6.0 / static_cast<double>(n), 1));
        LouvainConfig lc;
        lc.seed = trial;
        MfConfig cfg;
        cfg.seed = trial;
        const auto r = sinr_mf(g, louvain(g, lc), cfg);
        const auto &trace = r.loss_trace;
        double previous = -1.0;
        for (std::size_t start = 0; start + kMfWindow <= trace.size(); start += kMfWindow) {
            double mean = 0.0;
            for (std::size_t i = start; i < start + kMfWindow; ++i) mean += trace[i];
            mean /= static_cast<double>(kMfWindow);
            if (previous > 0.0) {
                worst = std::max(worst, mean / previous);
                violations += mean > kMfWindowSlack * previous;
            }
            previous = mean;
        }
    }
    const auto toy = sinr_mf(gen::complete_multipartite(30, 3), gen::parts_partition(30, 3));
    const double toy_loss = toy.loss_trace.back();
    return pass_if(violations == 0 && toy_loss < kMfToyLoss,
                   std::to_string(kMfGraphs) + " graphs, window " + std::to_string(kMfWindow) +
                       " epochs, worst window ratio " + fmt(worst, 4) + " (limit " + fmt(kMfWindowSlack, 2) +
                       "); exact toy MSE " + fmt(toy_loss, 8) + " (limit 1e-4)");
}

// Dense-column recomputation of both percentile clauses and the top-3 rule.
bool intrusion_oracle(const SparseEmbedding &e, const IntrusionTask &t) {
    auto column = [&](DimensionId d) {
        std::vector<double> c(e.rows());
        for (NodeId u = 0; u < e.rows(); ++u) c[u] = e.value(u, d);
        return c;
    };
    const auto col = column(t.dim);
    std::vector<std::pair<double, NodeId>> ranked;
    for (NodeId u = 0; u < e.rows(); ++u) ranked.emplace_back(-col[u], u);
    std::partial_sort(ranked.begin(), ranked.begin() + 3, ranked.end());
    std::set<std::string> top;
    for (std::size_t j = 0; j < 3; ++j) {
        if (ranked[j].first >= 0.0 || e.labels().label(ranked[j].second) != t.top[j]) return false;
        top.insert(t.top[j]);
    }
    std::multiset<std::string> shown(t.shown.begin(), t.shown.end());
    std::multiset<std::string> expected(top.begin(), top.end());
    expected.insert(t.intruder);
    if (shown != expected || top.count(t.intruder)) return false;
    const auto w = e.find(t.intruder);
    if (!w || !oracle::bottom_30(col, col[*w])) return false;
    for (const auto &entry : e.row(*w)) {
        if (entry.dim != t.dim && oracle::top_10(column(entry.dim), entry.value)) return true;
    }
    return false;
}

Outcome intrusion_generator() {
    std::mt19937_64 rng(15);
    const std::size_t blocks = 1200, block = 5;
    const auto g = gen::planted_blocks(rng, blocks, block, 2);
    std::vector<std::uint32_t> assignment(blocks * block);
    for (std::size_t u = 0; u < assignment.size(); ++u) assignment[u] = static_cast<std::uint32_t>(u / block);
    const auto e = sinr_nr(g, Partition(assignment));
    const auto tasks = sample_intrusion_tasks(e, kIntrusionTasks, 15, "planted");
    std::size_t valid = 0;
    for (const auto &t : tasks) valid += intrusion_oracle(e, t);
    return pass_if(tasks.size() == kIntrusionTasks && valid == tasks.size(),
                   std::to_string(valid) + "/" + std::to_string(tasks.size()) + " tasks pass the dense validator (" +
                       std::to_string(e.rows()) + " words, " + std::to_string(e.cols()) + " dimensions)");
}

} // namespace

std::vector<Criterion> offline_criteria() {
    return {
        {"C1", "node recall on the 8-node example", bridge_example},
        {"C8", "near-linear scaling in m (synthetic)", synthetic_scaling},
        {"C10", "node recall invariants vs brute force", nr_invariants},
        {"C11", "PMI filter vs exact rational evaluation", pmi_filter_decisions},
        {"C12", "varnn and Spearman properties", varnn_and_spearman},
        {"C13", "Louvain monotone modularity and planted cliques", louvain_properties},
        {"C14", "MF windowed loss and exact factorisation", mf_convergence},
        {"C15", "intrusion tasks vs percentile validator", intrusion_generator},
    };
}

} // namespace acceptance
