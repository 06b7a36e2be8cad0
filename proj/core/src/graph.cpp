#include "sinr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sinr/error.hpp"

namespace sinr {

NodeLabelMap NodeLabelMap::identity(std::size_t n) {
    NodeLabelMap map;
    map.labels_.reserve(n);
    map.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) map.intern(std::to_string(i));
    return map;
}

NodeId NodeLabelMap::intern(std::string_view label) {
    std::string key(label);
    auto [it, inserted] = index_.try_emplace(key, static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(std::move(key));
    return it->second;
}

std::optional<NodeId> NodeLabelMap::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string &NodeLabelMap::label(NodeId id) const {
    if (id >= labels_.size()) throw std::out_of_range("node id " + std::to_string(id) + " has no label");
    return labels_[id];
}

NodeLabelMap NodeLabelMap::subset(std::span<const NodeId> new_to_old) const {
    NodeLabelMap out;
    out.labels_.reserve(new_to_old.size());
    out.index_.reserve(new_to_old.size());
    for (NodeId old : new_to_old) out.intern(label(old));
    return out;
}

// ---------------------------------------------------------------------------

WeightedGraph WeightedGraph::from_csr(std::vector<std::size_t> offsets, std::vector<NodeId> targets,
                                      std::vector<double> weights, NodeLabelMap labels) {
    if (offsets.empty() || offsets.front() != 0 || offsets.back() != targets.size() ||
        targets.size() != weights.size()) {
        throw ValidationError("inconsistent CSR arrays");
    }
    const std::size_t n = offsets.size() - 1;
    if (!labels.empty() && labels.size() != n) throw ValidationError("label count does not match node count");

    WeightedGraph g;
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    g.weights_ = std::move(weights);
    g.labels_ = labels.empty() ? NodeLabelMap::identity(n) : std::move(labels);
    g.strength_.assign(n, 0.0);

    for (NodeId u = 0; u < n; ++u) {
        if (g.offsets_[u] > g.offsets_[u + 1]) throw ValidationError("CSR offsets are not monotone");
        for (std::size_t i = g.offsets_[u]; i < g.offsets_[u + 1]; ++i) {
            const NodeId v = g.targets_[i];
            const double w = g.weights_[i];
            if (v >= n) throw ValidationError("neighbor id out of range");
            if (v == u) throw ValidationError("self-loop at node " + std::to_string(u));
            if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("edge weights must be finite and > 0");
            if (i > g.offsets_[u] && g.targets_[i - 1] >= v) {
                throw ValidationError("adjacency of node " + std::to_string(u) + " is not strictly sorted");
            }
            g.strength_[u] += w;
        }
    }
    std::size_t half = 0;
    double total = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        for (std::size_t i = g.offsets_[u]; i < g.offsets_[u + 1]; ++i) {
            const NodeId v = g.targets_[i];
            if (g.edge_weight(v, u) != g.weights_[i]) throw ValidationError("adjacency is not symmetric");
            if (v > u) {
                ++half;
                total += g.weights_[i];
            }
        }
    }
    g.edge_count_ = half;
    g.total_weight_ = total;
    return g;
}

void WeightedGraph::check_node(NodeId u) const {
    if (u >= node_count()) {
        throw std::out_of_range("node " + std::to_string(u) + " out of range [0, " +
                                std::to_string(node_count()) + ")");
    }
}

std::span<const NodeId> WeightedGraph::neighbors(NodeId u) const {
    check_node(u);
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

std::span<const double> WeightedGraph::weights(NodeId u) const {
    check_node(u);
    return {weights_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

std::size_t WeightedGraph::degree(NodeId u) const {
    check_node(u);
    return offsets_[u + 1] - offsets_[u];
}

double WeightedGraph::weighted_degree(NodeId u) const {
    check_node(u);
    return strength_[u];
}

double WeightedGraph::edge_weight(NodeId u, NodeId v) const {
    const auto nbrs = neighbors(u);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
    if (it == nbrs.end() || *it != v) return 0.0;
    return weights_[offsets_[u] + static_cast<std::size_t>(it - nbrs.begin())];
}

bool WeightedGraph::operator==(const WeightedGraph &other) const {
    return offsets_ == other.offsets_ && targets_ == other.targets_ && weights_ == other.weights_ &&
           labels_ == other.labels_;
}

// ---------------------------------------------------------------------------

NodeId GraphBuilder::add_node(std::string_view label) {
    labeled_ = true;
    const NodeId id = labels_.intern(label);
    node_count_ = std::max<std::size_t>(node_count_, labels_.size());
    return id;
}

void GraphBuilder::add_edge(NodeId u, NodeId v, double weight) {
    if (!std::isfinite(weight)) throw ValidationError("edge weight must be finite");
    if (weight < 0.0) throw ValidationError("negative edge weight " + std::to_string(weight));
    node_count_ = std::max<std::size_t>(node_count_, std::size_t{std::max(u, v)} + 1);
    if (u == v || weight == 0.0) return;
    edges_.emplace_back(std::min(u, v), std::max(u, v), weight);
}

void GraphBuilder::add_edge(std::string_view a, std::string_view b, double weight) {
    const NodeId u = add_node(a);
    const NodeId v = add_node(b);
    add_edge(u, v, weight);
}

WeightedGraph GraphBuilder::build() const {
    const std::size_t n = node_count_;
    NodeLabelMap labels;
    if (labeled_) {
        labels = labels_;
        for (std::size_t id = labels.size(); id < n; ++id) {
            if (labels.intern(std::to_string(id)) != id) {
                throw ValidationError("unlabeled node " + std::to_string(id) + " collides with an existing label");
            }
        }
    }

    auto edges = edges_;
    std::sort(edges.begin(), edges.end(), [](const auto &a, const auto &b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::tuple<NodeId, NodeId, double>> merged;
    merged.reserve(edges.size());
    for (const auto &e : edges) {
        if (!merged.empty() && std::get<0>(merged.back()) == std::get<0>(e) &&
            std::get<1>(merged.back()) == std::get<1>(e)) {
            std::get<2>(merged.back()) += std::get<2>(e);
        } else {
            merged.push_back(e);
        }
    }

    std::vector<std::size_t> offsets(n + 1, 0);
    for (const auto &[u, v, w] : merged) {
        ++offsets[u + 1];
        ++offsets[v + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<NodeId> targets(offsets.back());
    std::vector<double> weights(offsets.back());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    // merged is sorted by (u, v) with u < v: emitting (v -> u) first for every v in
    // increasing u order and then (u -> v) keeps every adjacency list sorted.
    for (const auto &[u, v, w] : merged) {
        targets[cursor[v]] = u;
        weights[cursor[v]++] = w;
    }
    for (const auto &[u, v, w] : merged) {
        targets[cursor[u]] = v;
        weights[cursor[u]++] = w;
    }
    return WeightedGraph::from_csr(std::move(offsets), std::move(targets), std::move(weights), std::move(labels));
}

} // namespace sinr
