#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "file_util.hpp"
#include "sinr/eval_graph.hpp"
#include "sinr/graph_algorithms.hpp"
#include "sinr/clustering.hpp"
#include "sinr/parallel.hpp"
#include "sinr/random.hpp"
#include "sinr/stats.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t{u} << 32) | v;
}

std::string format_number(double v) { return detail::format_double(v); }

void describe_classifier(EvalReport &report, const ClassifierConfig &c) {
    if (c.kind == ClassifierKind::logistic) {
        report.set("classifier", "logistic");
        report.set("logistic_iterations", std::to_string(c.logistic_iterations));
        report.set("logistic_l2", format_number(c.logistic_l2));
    } else {
        report.set("classifier", "gbdt");
        report.set("gbdt_rounds", std::to_string(c.rounds));
        report.set("gbdt_max_depth", std::to_string(c.max_depth));
        report.set("gbdt_learning_rate", format_number(c.learning_rate));
        report.set("gbdt_lambda", format_number(c.lambda));
    }
}

// Adjacency with removable edges for the split's connectivity checks.
class MutableGraph {
public:
    explicit MutableGraph(const WeightedGraph &g) : adj_(g.node_count()), mark_(g.node_count(), 0) {
        g.for_each_edge([&](NodeId u, NodeId v, double) {
            const auto id = static_cast<std::uint32_t>(alive_.size());
            alive_.push_back(1);
            adj_[u].push_back({v, id});
            adj_[v].push_back({u, id});
        });
    }

    // True if u and v stay connected once edge `id` is ignored.
    bool connected_without(NodeId u, NodeId v, std::uint32_t id) {
        ++stamp_;
        if (stamp_ == 0) {
            std::fill(mark_.begin(), mark_.end(), 0);
            stamp_ = 1;
        }
        queue_.clear();
        queue_.push_back(u);
        mark_[u] = stamp_;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            for (const auto &[w, eid] : adj_[queue_[head]]) {
                if (!alive_[eid] || eid == id || mark_[w] == stamp_) continue;
                if (w == v) return true;
                mark_[w] = stamp_;
                queue_.push_back(w);
            }
        }
        return false;
    }

    void remove(std::uint32_t id) { alive_[id] = 0; }

private:
    std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> adj_;
    std::vector<char> alive_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<NodeId> queue_;
};

template <class Fn> void run_parallel(std::size_t runs, std::size_t jobs, std::vector<double> &values, Fn &&fn) {
    values.assign(runs, 0.0);
    parallel_for(runs, jobs, [&](std::size_t r) { values[r] = fn(r); });
}

// Random node split with at least one node on each side.
std::pair<std::vector<NodeId>, std::vector<NodeId>> split_nodes(std::vector<NodeId> nodes, double train_fraction,
                                                                 Rng &rng) {
    if (nodes.size() < 2) throw ValidationError("a node split needs at least two nodes");
    shuffle(nodes.begin(), nodes.end(), rng);
    auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(nodes.size())));
    cut = std::clamp<std::size_t>(cut, 1, nodes.size() - 1);
    std::vector<NodeId> test(nodes.begin() + static_cast<std::ptrdiff_t>(cut), nodes.end());
    nodes.resize(cut);
    std::sort(nodes.begin(), nodes.end());
    std::sort(test.begin(), test.end());
    return {std::move(nodes), std::move(test)};
}

void check_fraction(double f, const char *what) {
    if (!(f > 0.0 && f < 1.0)) throw ValidationError(std::string(what) + " must lie in (0, 1)");
}

} // namespace

std::string model_name(const EmbedderSpec &spec) { return spec.kind == EmbedderKind::nr ? "SINr-NR" : "SINr-MF"; }

EmbeddingFactory make_embedder(const EmbedderSpec &spec) {
    return [spec](const WeightedGraph &g, std::uint64_t seed) {
        LouvainConfig lc = spec.louvain;
        lc.seed = derive_seed(seed, 1);
        const Partition p = louvain(g, lc);
        if (spec.kind == EmbedderKind::nr) return sinr_nr(g, p);
        MfConfig mc = spec.mf;
        mc.seed = derive_seed(seed, 2);
        return sinr_mf(g, p, mc).embedding;
    };
}

// ---------------------------------------------------------------------------

namespace {

EdgeHoldout hold_out(const WeightedGraph &g, double test_fraction, Rng &rng) {
    check_fraction(test_fraction, "test fraction");
    const std::size_t m = g.edge_count();
    const auto target = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(m)));
    if (target == 0) throw ValidationError("graph too small for a link prediction split");

    std::vector<NodePair> edges;
    edges.reserve(m);
    g.for_each_edge([&](NodeId u, NodeId v, double) { edges.emplace_back(u, v); });

    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    shuffle(order.begin(), order.end(), rng);

    MutableGraph work(g);
    std::vector<char> removed(m, 0);
    std::size_t taken = 0;
    for (std::size_t i = 0; i < m && taken < target; ++i) {
        const auto id = order[i];
        const auto [u, v] = edges[id];
        if (work.connected_without(u, v, id)) {
            work.remove(id);
            removed[id] = 1;
            ++taken;
        }
    }
    if (taken < target) {
        const double achieved = static_cast<double>(taken) / static_cast<double>(m);
        throw SplitError("only " + std::to_string(taken) + " of " + std::to_string(target) +
                             " test edges can be removed without disconnecting the graph (achieved fraction " +
                             format_number(achieved) + ")",
                         achieved);
    }

    EdgeHoldout out;
    GraphBuilder builder(g.node_count());
    for (std::uint32_t id = 0; id < m; ++id) {
        const auto [u, v] = edges[id];
        if (removed[id]) {
            out.test_pos.push_back(edges[id]);
        } else {
            out.train_pos.push_back(edges[id]);
            builder.add_edge(u, v, g.edge_weight(u, v));
        }
    }
    const WeightedGraph train = builder.build();
    out.train = WeightedGraph::from_csr({train.offsets().begin(), train.offsets().end()},
                                        {train.targets().begin(), train.targets().end()},
                                        {train.all_weights().begin(), train.all_weights().end()}, g.labels());
    return out;
}

} // namespace

EdgeHoldout hold_out_edges(const WeightedGraph &g, double test_fraction, std::uint64_t seed) {
    Rng rng(seed);
    return hold_out(g, test_fraction, rng);
}

LinkPredSplit make_linkpred_split(const WeightedGraph &g, double test_fraction, std::uint64_t seed) {
    Rng rng(seed);
    EdgeHoldout holdout = hold_out(g, test_fraction, rng);
    LinkPredSplit split;
    split.seed = seed;
    split.train = std::move(holdout.train);
    split.train_pos = std::move(holdout.train_pos);
    split.test_pos = std::move(holdout.test_pos);
    const std::size_t m = g.edge_count();

    const std::size_t n = g.node_count();
    const std::size_t wanted = split.train_pos.size() + split.test_pos.size();
    const double non_edges = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 - static_cast<double>(m);
    if (static_cast<double>(wanted) > non_edges) throw ValidationError("not enough non-edges for balanced negatives");
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(wanted * 2);
    std::vector<NodePair> negatives;
    negatives.reserve(wanted);
    while (negatives.size() < wanted) {
        const auto u = static_cast<NodeId>(uniform_index(rng, n));
        const auto v = static_cast<NodeId>(uniform_index(rng, n));
        if (u == v || g.has_edge(u, v)) continue;
        if (!chosen.insert(pair_key(u, v)).second) continue;
        negatives.emplace_back(std::min(u, v), std::max(u, v));
    }
    split.test_neg.assign(negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(split.test_pos.size()));
    split.train_neg.assign(negatives.begin() + static_cast<std::ptrdiff_t>(split.test_pos.size()), negatives.end());
    return split;
}

SparseRow hadamard_features(const SparseEmbedding &e, NodeId u, NodeId v) {
    const auto a = e.row(u);
    const auto b = e.row(v);
    SparseRow out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].dim < b[j].dim) {
            ++i;
        } else if (b[j].dim < a[i].dim) {
            ++j;
        } else {
            out.push_back({a[i].dim, a[i].value * b[j].value});
            ++i;
            ++j;
        }
    }
    return out;
}

std::array<double, 5> heuristic_features(const WeightedGraph &g, NodeId u, NodeId v) {
    const auto nu = g.neighbors(u);
    const auto nv = g.neighbors(v);
    double cn = 0.0, aa = 0.0, ra = 0.0;
    std::size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j]) {
            ++i;
        } else if (nv[j] < nu[i]) {
            ++j;
        } else {
            const double dz = static_cast<double>(g.degree(nu[i]));
            cn += 1.0;
            if (dz > 1.0) aa += 1.0 / std::log(dz);
            ra += 1.0 / dz;
            ++i;
            ++j;
        }
    }
    const double du = static_cast<double>(nu.size());
    const double dv = static_cast<double>(nv.size());
    const double uni = du + dv - cn;
    return {cn, aa, du * dv, uni > 0.0 ? cn / uni : 0.0, ra};
}

LinkFeaturizer embedding_featurizer(EmbeddingFactory embedder) {
    return [embedder = std::move(embedder)](const LinkPredSplit &split, std::uint64_t seed) -> PairFeatures {
        auto e = std::make_shared<SparseEmbedding>(embedder(split.train, seed));
        return [e](std::span<const NodePair> pairs) {
            FeatureMatrix x = FeatureMatrix::Zero(static_cast<Eigen::Index>(pairs.size()),
                                                  static_cast<Eigen::Index>(e->cols()));
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                for (const auto &entry : hadamard_features(*e, pairs[i].first, pairs[i].second)) {
                    x(static_cast<Eigen::Index>(i), entry.dim) = entry.value;
                }
            }
            return x;
        };
    };
}

LinkFeaturizer heuristic_featurizer() {
    return [](const LinkPredSplit &split, std::uint64_t) -> PairFeatures {
        const WeightedGraph *train = &split.train;
        return [train](std::span<const NodePair> pairs) {
            FeatureMatrix x(static_cast<Eigen::Index>(pairs.size()), 5);
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const auto f = heuristic_features(*train, pairs[i].first, pairs[i].second);
                for (Eigen::Index c = 0; c < 5; ++c) x(static_cast<Eigen::Index>(i), c) = f[static_cast<std::size_t>(c)];
            }
            return x;
        };
    };
}

EvalReport run_link_prediction(const WeightedGraph &g, const LinkFeaturizer &featurizer, const LinkPredConfig &config,
                               const std::string &model) {
    if (config.runs == 0) throw ValidationError("at least one run is required");
    EvalReport report;
    report.task = "linkpred";
    report.model = model;
    report.metric = "accuracy";
    report.set("runs", std::to_string(config.runs));
    report.set("seed", std::to_string(config.seed));
    report.set("test_fraction", format_number(config.test_fraction));
    report.set("negatives", "balanced");
    describe_classifier(report, config.classifier);

    run_parallel(config.runs, config.jobs, report.values, [&](std::size_t run) {
        const std::uint64_t run_seed = derive_seed(config.seed, run);
        const LinkPredSplit split = make_linkpred_split(g, config.test_fraction, derive_seed(run_seed, 0));
        const PairFeatures features = featurizer(split, derive_seed(run_seed, 1));

        std::vector<NodePair> train_pairs = split.train_pos;
        train_pairs.insert(train_pairs.end(), split.train_neg.begin(), split.train_neg.end());
        std::vector<std::uint32_t> train_y(split.train_pos.size(), 1);
        train_y.resize(train_pairs.size(), 0);
        std::vector<NodePair> test_pairs = split.test_pos;
        test_pairs.insert(test_pairs.end(), split.test_neg.begin(), split.test_neg.end());
        std::vector<std::uint32_t> test_y(split.test_pos.size(), 1);
        test_y.resize(test_pairs.size(), 0);

        auto clf = make_classifier(config.classifier);
        clf->fit(features(train_pairs), train_y, 2);
        return accuracy(clf->predict(features(test_pairs)), test_y);
    });
    return report;
}

// ---------------------------------------------------------------------------

std::string target_name(RegressionTarget target) {
    switch (target) {
    case RegressionTarget::degree:
        return "degree";
    case RegressionTarget::clustering_coefficient:
        return "clustcoef";
    case RegressionTarget::pagerank:
        return "pagerank";
    }
    return "unknown";
}

std::vector<double> regression_target(const WeightedGraph &g, RegressionTarget target) {
    switch (target) {
    case RegressionTarget::degree: {
        std::vector<double> out(g.node_count());
        for (NodeId u = 0; u < g.node_count(); ++u) out[u] = static_cast<double>(g.degree(u));
        return out;
    }
    case RegressionTarget::clustering_coefficient:
        return clustering_coefficients(g);
    case RegressionTarget::pagerank:
        return pagerank(g);
    }
    return {};
}

FeatureMatrix dense_rows(const SparseEmbedding &e, std::span<const NodeId> nodes) {
    FeatureMatrix x = FeatureMatrix::Zero(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(e.cols()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto &entry : e.row(nodes[i])) x(static_cast<Eigen::Index>(i), entry.dim) = entry.value;
    }
    return x;
}

EvalReport run_regression(const WeightedGraph &g, const EmbeddingFactory &embedder, RegressionTarget target,
                          const NodeTaskConfig &config, const std::string &model) {
    if (config.runs == 0) throw ValidationError("at least one run is required");
    check_fraction(config.train_fraction, "train fraction");
    EvalReport report;
    report.task = target_name(target);
    report.model = model;
    report.metric = "r2";
    report.set("runs", std::to_string(config.runs));
    report.set("seed", std::to_string(config.seed));
    report.set("train_fraction", format_number(config.train_fraction));
    report.set("regressor", "ols");

    const std::vector<double> y = regression_target(g, target);
    std::vector<NodeId> all(g.node_count());
    std::iota(all.begin(), all.end(), 0u);
    std::vector<char> ridge(config.runs, 0);
    run_parallel(config.runs, config.jobs, report.values, [&](std::size_t run) {
        const std::uint64_t run_seed = derive_seed(config.seed, run);
        const SparseEmbedding e = embedder(g, derive_seed(run_seed, 1));
        Rng rng(derive_seed(run_seed, 0));
        const auto [train, test] = split_nodes(all, config.train_fraction, rng);
        Eigen::VectorXd ytrain(static_cast<Eigen::Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) ytrain(static_cast<Eigen::Index>(i)) = y[train[i]];
        const LinearModel fit = fit_least_squares(dense_rows(e, train), ytrain);
        ridge[run] = fit.ridge;
        const Eigen::VectorXd pred = fit.predict(Eigen::MatrixXd(dense_rows(e, test)));
        std::vector<double> truth(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) truth[i] = y[test[i]];
        return r_squared(truth, std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())));
    });
    const auto ridge_runs = static_cast<std::size_t>(std::count(ridge.begin(), ridge.end(), 1));
    if (ridge_runs > 0) {
        report.note("rank-deficient design in " + std::to_string(ridge_runs) + " of " + std::to_string(config.runs) +
                    " runs; ridge penalty 1e-8 used");
    }
    return report;
}

std::size_t NodeLabels::labeled() const {
    return static_cast<std::size_t>(std::count_if(label.begin(), label.end(), [](auto l) { return l != kNoLabel; }));
}

NodeLabels read_node_labels(std::istream &in, const NodeLabelMap &nodes, std::string_view source) {
    NodeLabels out;
    out.label.assign(nodes.size(), kNoLabel);
    std::unordered_map<std::string, std::uint32_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (detail::is_comment(text)) continue;
        const auto fields = detail::split_fields(text);
        if (fields.size() != 2) throw ParseError(std::string(source), line_no, "expected 'node<TAB>label'");
        const auto node = nodes.find(fields[0]);
        if (!node) continue;
        auto [it, inserted] = ids.try_emplace(std::string(fields[1]), static_cast<std::uint32_t>(out.names.size()));
        if (inserted) out.names.emplace_back(fields[1]);
        if (out.label[*node] != kNoLabel && out.label[*node] != it->second) {
            throw ParseError(std::string(source), line_no, "node '" + std::string(fields[0]) + "' has two labels");
        }
        out.label[*node] = it->second;
    }
    return out;
}

NodeLabels load_node_labels(const std::filesystem::path &path, const NodeLabelMap &nodes) {
    auto in = detail::open_input(path);
    return read_node_labels(in, nodes, path.string());
}

namespace {

// Labelled nodes and their labels renumbered densely by first appearance.
struct LabelledNodes {
    std::vector<NodeId> nodes;
    std::vector<std::uint32_t> labels;
    std::size_t classes = 0;
};

LabelledNodes collect_labelled(const WeightedGraph &g, const NodeLabels &labels) {
    if (labels.label.size() != g.node_count()) throw ValidationError("labels do not match the graph");
    LabelledNodes out;
    std::unordered_map<std::uint32_t, std::uint32_t> dense;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (labels.label[u] == kNoLabel) continue;
        out.nodes.push_back(u);
        out.labels.push_back(
            dense.try_emplace(labels.label[u], static_cast<std::uint32_t>(dense.size())).first->second);
    }
    out.classes = dense.size();
    if (out.classes < 2) throw ValidationError("node tasks need at least two label classes");
    return out;
}

} // namespace

EvalReport run_spectral_clustering(const WeightedGraph &g, const EmbeddingFactory &embedder, const NodeLabels &labels,
                                   const NodeTaskConfig &config, const std::string &model) {
    if (config.runs == 0) throw ValidationError("at least one run is required");
    const LabelledNodes ln = collect_labelled(g, labels);
    EvalReport report;
    report.task = "spectral";
    report.model = model;
    report.metric = "nmi";
    report.set("runs", std::to_string(config.runs));
    report.set("seed", std::to_string(config.seed));
    report.set("clusters", std::to_string(ln.classes));
    report.set("affinity", "cosine");
    report.set("affinity_floor", "1e-12");
    report.set("laplacian", "normalized");
    if (ln.nodes.size() < g.node_count()) {
        report.note(std::to_string(g.node_count() - ln.nodes.size()) + " unlabelled nodes left out of the clustering");
    }
    run_parallel(config.runs, config.jobs, report.values, [&](std::size_t run) {
        const std::uint64_t run_seed = derive_seed(config.seed, run);
        const SparseEmbedding full = embedder(g, derive_seed(run_seed, 1));
        std::vector<SparseRow> rows;
        rows.reserve(ln.nodes.size());
        for (NodeId u : ln.nodes) rows.emplace_back(full.row(u).begin(), full.row(u).end());
        const SparseEmbedding sub(full.cols(), std::move(rows));
        const auto clusters = spectral_clustering(sub, ln.classes, derive_seed(run_seed, 0));
        return nmi(clusters, ln.labels);
    });
    return report;
}

EvalReport run_classification(const WeightedGraph &g, const EmbeddingFactory &embedder, const NodeLabels &labels,
                              const NodeTaskConfig &config, const std::string &model) {
    if (config.runs == 0) throw ValidationError("at least one run is required");
    check_fraction(config.train_fraction, "train fraction");
    const LabelledNodes ln = collect_labelled(g, labels);
    EvalReport report;
    report.task = "classify";
    report.model = model;
    report.metric = "accuracy";
    report.set("runs", std::to_string(config.runs));
    report.set("seed", std::to_string(config.seed));
    report.set("train_fraction", format_number(config.train_fraction));
    report.set("classes", std::to_string(ln.classes));
    describe_classifier(report, config.classifier);

    std::vector<std::size_t> redraws(config.runs, 0);
    std::vector<NodeId> index(ln.nodes.size());
    std::iota(index.begin(), index.end(), 0u);
    run_parallel(config.runs, config.jobs, report.values, [&](std::size_t run) {
        const std::uint64_t run_seed = derive_seed(config.seed, run);
        Rng rng(derive_seed(run_seed, 0));
        std::vector<NodeId> train, test;
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt == 100) throw ValidationError("no train split holds every class after 100 draws");
            std::tie(train, test) = split_nodes(index, config.train_fraction, rng);
            std::vector<char> seen(ln.classes, 0);
            for (auto i : train) seen[ln.labels[i]] = 1;
            if (std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; })) break;
            ++redraws[run];
        }
        const SparseEmbedding e = embedder(g, derive_seed(run_seed, 1));
        auto gather = [&](const std::vector<NodeId> &part, std::vector<std::uint32_t> &y) {
            std::vector<NodeId> nodes;
            nodes.reserve(part.size());
            y.clear();
            for (auto i : part) {
                nodes.push_back(ln.nodes[i]);
                y.push_back(ln.labels[i]);
            }
            return dense_rows(e, nodes);
        };
        std::vector<std::uint32_t> ytrain, ytest;
        const FeatureMatrix xtrain = gather(train, ytrain);
        const FeatureMatrix xtest = gather(test, ytest);
        auto clf = make_classifier(config.classifier);
        clf->fit(xtrain, ytrain, ln.classes);
        return accuracy(clf->predict(xtest), ytest);
    });
    const std::size_t total_redraws = std::accumulate(redraws.begin(), redraws.end(), std::size_t{0});
    if (total_redraws > 0) report.note(std::to_string(total_redraws) + " node splits redrawn to cover every class");
    return report;
}

} // namespace sinr
