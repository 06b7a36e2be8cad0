#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sinr/error.hpp"
#include "sinr/graph.hpp"

namespace sinr {

struct ComponentLabels {
    std::vector<std::uint32_t> component; ///< component index per node, numbered by smallest member
    std::size_t count = 0;
};

ComponentLabels connected_components(const WeightedGraph &g);

/// An induced subgraph plus the id mapping in both directions.
struct Subgraph {
    WeightedGraph graph;
    std::vector<NodeId> old_to_new; ///< kInvalidNode for dropped nodes
    std::vector<NodeId> new_to_old;
};

/// Keeps `nodes` (any order, no duplicates); new ids follow ascending old id.
Subgraph induced_subgraph(const WeightedGraph &g, std::span<const NodeId> nodes);

/**
 * Largest connected component. Ties go to the component holding the smallest
 * node id. A connected input yields the identity remap. Throws
 * ValidationError on an empty graph.
 */
Subgraph largest_connected_component(const WeightedGraph &g);

/// Local clustering coefficient on the unweighted skeleton; 0 when d(u) < 2.
double clustering_coefficient(const WeightedGraph &g, NodeId u);
std::vector<double> clustering_coefficients(const WeightedGraph &g);

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10;
    std::size_t max_iterations = 10000;
};

/// Thrown when power iteration hits max_iterations; keeps the last iterate.
class PageRankNotConverged : public Error {
public:
    PageRankNotConverged(std::vector<double> last, std::size_t iterations, double residual);

    const std::vector<double> &last_iterate() const noexcept { return last_; }
    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> last_;
    std::size_t iterations_;
    double residual_;
};

/**
 * Weighted PageRank by power iteration on the row-stochastic transition
 * matrix P(u, v) = w(u, v) / d_w(u). Iterates until the L1 change drops below
 * `tolerance`. Mass of nodes without edges is spread uniformly.
 */
std::vector<double> pagerank(const WeightedGraph &g, const PageRankOptions &options = {});

} // namespace sinr
