#include "sinr/graph_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace sinr {

ComponentLabels connected_components(const WeightedGraph &g) {
    const std::size_t n = g.node_count();
    ComponentLabels out;
    out.component.assign(n, UINT32_MAX);
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (out.component[s] != UINT32_MAX) continue;
        const auto c = static_cast<std::uint32_t>(out.count++);
        out.component[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (out.component[v] == UINT32_MAX) {
                    out.component[v] = c;
                    stack.push_back(v);
                }
            }
        }
    }
    return out;
}

Subgraph induced_subgraph(const WeightedGraph &g, std::span<const NodeId> nodes) {
    Subgraph out;
    out.old_to_new.assign(g.node_count(), kInvalidNode);
    out.new_to_old.assign(nodes.begin(), nodes.end());
    std::sort(out.new_to_old.begin(), out.new_to_old.end());
    for (NodeId i = 0; i < out.new_to_old.size(); ++i) {
        const NodeId old = out.new_to_old[i];
        if (out.old_to_new.at(old) != kInvalidNode) throw ValidationError("duplicate node in subgraph selection");
        out.old_to_new[old] = i;
    }

    std::vector<std::size_t> offsets{0};
    std::vector<NodeId> targets;
    std::vector<double> weights;
    offsets.reserve(out.new_to_old.size() + 1);
    for (NodeId old : out.new_to_old) {
        const auto nbrs = g.neighbors(old);
        const auto ws = g.weights(old);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const NodeId mapped = out.old_to_new[nbrs[i]];
            if (mapped == kInvalidNode) continue;
            targets.push_back(mapped);
            weights.push_back(ws[i]);
        }
        offsets.push_back(targets.size());
    }
    out.graph = WeightedGraph::from_csr(std::move(offsets), std::move(targets), std::move(weights),
                                        g.labels().subset(out.new_to_old));
    return out;
}

Subgraph largest_connected_component(const WeightedGraph &g) {
    if (g.empty()) throw ValidationError("largest connected component of an empty graph");
    const auto comps = connected_components(g);
    std::vector<std::size_t> sizes(comps.count, 0);
    for (auto c : comps.component) ++sizes[c];
    // Components are numbered by their smallest member, so max_element's
    // first-maximum rule is the documented tie-break.
    const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<NodeId> keep;
    keep.reserve(sizes[best]);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (comps.component[u] == best) keep.push_back(u);
    }
    return induced_subgraph(g, keep);
}

double clustering_coefficient(const WeightedGraph &g, NodeId u) {
    const auto nu = g.neighbors(u);
    const std::size_t d = nu.size();
    if (d < 2) return 0.0;
    std::size_t links = 0;
    for (NodeId v : nu) {
        const auto nv = g.neighbors(v);
        // |N(u) ∩ N(v)| by merging two sorted lists.
        auto a = nu.begin();
        auto b = nv.begin();
        while (a != nu.end() && b != nv.end()) {
            if (*a < *b) {
                ++a;
            } else if (*b < *a) {
                ++b;
            } else {
                ++links;
                ++a;
                ++b;
            }
        }
    }
    // Each edge among the neighbors was counted from both endpoints.
    return static_cast<double>(links) / static_cast<double>(d * (d - 1));
}

std::vector<double> clustering_coefficients(const WeightedGraph &g) {
    std::vector<double> out(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) out[u] = clustering_coefficient(g, u);
    return out;
}

PageRankNotConverged::PageRankNotConverged(std::vector<double> last, std::size_t iterations, double residual)
    : Error("PageRank did not converge after " + std::to_string(iterations) +
            " iterations (L1 change " + std::to_string(residual) + ")"),
      last_(std::move(last)), iterations_(iterations), residual_(residual) {}

std::vector<double> pagerank(const WeightedGraph &g, const PageRankOptions &options) {
    if (!(options.damping > 0.0 && options.damping < 1.0)) throw ValidationError("damping must lie in (0, 1)");
    if (!(options.tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
    const std::size_t n = g.node_count();
    if (n == 0) return {};

    const double d = options.damping;
    const double base = (1.0 - d) / static_cast<double>(n);
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    std::vector<double> inv_strength(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        const double s = g.weighted_degree(u);
        if (s > 0.0) inv_strength[u] = 1.0 / s;
    }

    double residual = 0.0;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        double dangling = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            if (inv_strength[u] == 0.0) dangling += x[u];
        }
        const double fill = base + d * dangling / static_cast<double>(n);
        // The graph is symmetric: incoming contributions come from the adjacency of v.
        for (NodeId v = 0; v < n; ++v) {
            const auto nbrs = g.neighbors(v);
            const auto ws = g.weights(v);
            double acc = 0.0;
            for (std::size_t i = 0; i < nbrs.size(); ++i) acc += x[nbrs[i]] * ws[i] * inv_strength[nbrs[i]];
            next[v] = fill + d * acc;
        }
        residual = 0.0;
        for (NodeId u = 0; u < n; ++u) residual += std::abs(next[u] - x[u]);
        x.swap(next);
        if (residual < options.tolerance) return x;
    }
    throw PageRankNotConverged(std::move(x), options.max_iterations, residual);
}

} // namespace sinr
