#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace sinr {

using NodeId = std::uint32_t;
inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

/**
 * Bijection between contiguous node ids and external labels (words, vertex
 * names from an edge list). Ids are handed out in first-seen order.
 */
class NodeLabelMap {
public:
    NodeLabelMap() = default;

    /// Labels "0", "1", ..., "n-1".
    static NodeLabelMap identity(std::size_t n);

    /// Returns the id of `label`, creating it if unseen.
    NodeId intern(std::string_view label);

    std::optional<NodeId> find(std::string_view label) const;
    const std::string &label(NodeId id) const;
    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::span<const std::string> labels() const noexcept { return labels_; }

    /// Labels of `new_to_old[i]` become id i of the result.
    NodeLabelMap subset(std::span<const NodeId> new_to_old) const;

    bool operator==(const NodeLabelMap &other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
};

/**
 * Immutable undirected weighted graph in CSR form.
 *
 * Every undirected edge {u, v} is stored twice, once in each adjacency list.
 * Adjacency lists are sorted by neighbor id, hold no self-loops, no duplicates
 * and only strictly positive weights. Build instances with GraphBuilder or
 * WeightedGraph::from_csr.
 */
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Validates symmetry, ordering and weight invariants; throws ValidationError.
    static WeightedGraph from_csr(std::vector<std::size_t> offsets, std::vector<NodeId> targets,
                                  std::vector<double> weights, NodeLabelMap labels);

    std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return edge_count_; }
    /// Sum of edge weights, each undirected edge counted once.
    double total_weight() const noexcept { return total_weight_; }
    bool empty() const noexcept { return node_count() == 0; }

    std::span<const NodeId> neighbors(NodeId u) const;
    std::span<const double> weights(NodeId u) const;

    /// Unweighted degree |N(u)|. Throws std::out_of_range for u >= n.
    std::size_t degree(NodeId u) const;
    /// Sum of incident edge weights.
    double weighted_degree(NodeId u) const;

    /// Weight of {u, v}, or 0 when the edge is absent.
    double edge_weight(NodeId u, NodeId v) const;
    bool has_edge(NodeId u, NodeId v) const { return edge_weight(u, v) > 0.0; }

    const NodeLabelMap &labels() const noexcept { return labels_; }
    std::span<const std::size_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> targets() const noexcept { return targets_; }
    std::span<const double> all_weights() const noexcept { return weights_; }

    /// Calls f(u, v, w) once per undirected edge with u < v.
    template <class F> void for_each_edge(F &&f) const {
        for (NodeId u = 0; u < node_count(); ++u) {
            for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) {
                if (targets_[i] > u) f(u, targets_[i], weights_[i]);
            }
        }
    }

    bool operator==(const WeightedGraph &other) const;

private:
    void check_node(NodeId u) const;

    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<double> weights_;
    std::vector<double> strength_;
    std::size_t edge_count_ = 0;
    double total_weight_ = 0.0;
    NodeLabelMap labels_;
};

/**
 * Accumulates edges and produces a WeightedGraph. Duplicate edges have their
 * weights summed, self-loops and zero weights are dropped, negative weights
 * are rejected.
 */
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t node_count = 0) : node_count_(node_count) {}

    /// Interns a label and returns its id; switches the builder to labeled mode.
    NodeId add_node(std::string_view label);

    void add_edge(NodeId u, NodeId v, double weight = 1.0);
    void add_edge(std::string_view a, std::string_view b, double weight = 1.0);

    std::size_t node_count() const noexcept { return node_count_; }

    WeightedGraph build() const;

private:
    std::size_t node_count_;
    NodeLabelMap labels_;
    bool labeled_ = false;
    std::vector<std::tuple<NodeId, NodeId, double>> edges_;
};

} // namespace sinr
