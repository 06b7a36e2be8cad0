#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sinr/classifier.hpp"
#include "sinr/community.hpp"
#include "sinr/embed.hpp"
#include "sinr/embedding.hpp"
#include "sinr/eval_report.hpp"
#include "sinr/graph.hpp"

namespace sinr {

enum class EmbedderKind { nr, mf };

struct EmbedderSpec {
    EmbedderKind kind = EmbedderKind::nr;
    LouvainConfig louvain; ///< seed is replaced by the per-run seed
    MfConfig mf;           ///< seed is replaced by the per-run seed
};

std::string model_name(const EmbedderSpec &spec);

/// Trains an embedding of a graph; `seed` drives every random choice.
using EmbeddingFactory = std::function<SparseEmbedding(const WeightedGraph &, std::uint64_t seed)>;

/// Louvain with spec.louvain.gamma, then node recall or factorisation.
EmbeddingFactory make_embedder(const EmbedderSpec &spec);

// ---------------------------------------------------------------------------
// Link prediction

using NodePair = std::pair<NodeId, NodeId>;

struct LinkPredSplit {
    WeightedGraph train;             ///< input minus the test edges, same node ids
    std::vector<NodePair> train_pos; ///< edges of `train`
    std::vector<NodePair> test_pos;
    std::vector<NodePair> train_neg; ///< non-edges, as many as train_pos
    std::vector<NodePair> test_neg;  ///< non-edges, as many as test_pos
    std::uint64_t seed = 0;
};

/// Raised when the requested share of edges cannot be removed without
/// splitting a component.
class SplitError : public Error {
public:
    SplitError(const std::string &message, double achieved) : Error(message), achieved_(achieved) {}
    double achieved_fraction() const noexcept { return achieved_; }

private:
    double achieved_;
};

struct EdgeHoldout {
    WeightedGraph train;
    std::vector<NodePair> train_pos;
    std::vector<NodePair> test_pos;
};

/**
 * Removes floor(test_fraction * m) edges, visiting edges in a seeded random
 * order and skipping any edge whose removal would disconnect its endpoints.
 * Throws SplitError when fewer edges qualify.
 */
EdgeHoldout hold_out_edges(const WeightedGraph &g, double test_fraction, std::uint64_t seed);

/**
 * hold_out_edges plus negatives. Negatives are distinct non-edges of the input graph drawn uniformly
 * without replacement; train and test negatives are disjoint.
 */
LinkPredSplit make_linkpred_split(const WeightedGraph &g, double test_fraction, std::uint64_t seed);

/// Elementwise product of two rows; nonzero only on shared dimensions.
SparseRow hadamard_features(const SparseEmbedding &e, NodeId u, NodeId v);

/// Common neighbours, Adamic-Adar, preferential attachment, Jaccard and
/// resource allocation on the unweighted skeleton of g.
std::array<double, 5> heuristic_features(const WeightedGraph &g, NodeId u, NodeId v);

/// Features for a list of pairs, built once per split.
using PairFeatures = std::function<FeatureMatrix(std::span<const NodePair>)>;
using LinkFeaturizer = std::function<PairFeatures(const LinkPredSplit &, std::uint64_t seed)>;

/// Embeds split.train and uses dense Hadamard products.
LinkFeaturizer embedding_featurizer(EmbeddingFactory embedder);
/// Heuristic scores computed on split.train.
LinkFeaturizer heuristic_featurizer();

struct LinkPredConfig {
    double test_fraction = 0.2;
    std::size_t runs = 50;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    ClassifierConfig classifier;
};

/// Accuracy on the balanced test set, one value per run.
EvalReport run_link_prediction(const WeightedGraph &g, const LinkFeaturizer &featurizer, const LinkPredConfig &config,
                               const std::string &model);

// ---------------------------------------------------------------------------
// Node-level tasks

struct NodeTaskConfig {
    std::size_t runs = 50;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    std::size_t jobs = 1;
    ClassifierConfig classifier;
};

enum class RegressionTarget { degree, clustering_coefficient, pagerank };
std::string target_name(RegressionTarget target);
std::vector<double> regression_target(const WeightedGraph &g, RegressionTarget target);

/// Embedding rows as a dense design matrix.
FeatureMatrix dense_rows(const SparseEmbedding &e, std::span<const NodeId> nodes);

/**
 * Per run: embed the full graph, split nodes 80/20, fit least squares on the
 * training rows and score R^2 on the held-out rows.
 */
EvalReport run_regression(const WeightedGraph &g, const EmbeddingFactory &embedder, RegressionTarget target,
                          const NodeTaskConfig &config, const std::string &model);

inline constexpr std::uint32_t kNoLabel = UINT32_MAX;

struct NodeLabels {
    std::vector<std::uint32_t> label; ///< per node; kNoLabel when unknown
    std::vector<std::string> names;   ///< label id -> name
    std::size_t labeled() const;
};

/// "node<TAB>label" rows; nodes absent from `nodes` are ignored.
NodeLabels read_node_labels(std::istream &in, const NodeLabelMap &nodes, std::string_view source = "<stream>");
NodeLabels load_node_labels(const std::filesystem::path &path, const NodeLabelMap &nodes);

/// NMI between ground truth and spectral clusters of the labelled rows.
EvalReport run_spectral_clustering(const WeightedGraph &g, const EmbeddingFactory &embedder, const NodeLabels &labels,
                                   const NodeTaskConfig &config, const std::string &model);

/// Multiclass accuracy on held-out labelled nodes. Splits that miss a class
/// in the training part are redrawn.
EvalReport run_classification(const WeightedGraph &g, const EmbeddingFactory &embedder, const NodeLabels &labels,
                              const NodeTaskConfig &config, const std::string &model);

} // namespace sinr
