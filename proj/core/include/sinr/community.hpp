#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sinr/graph.hpp"
#include "sinr/partition.hpp"

namespace sinr {

struct LouvainConfig {
    double gamma = 1.0; ///< resolution; larger values yield more, smaller communities
    std::uint64_t seed = 0;
    double min_modularity_gain = 1e-6;
    std::size_t max_passes = 100;
};

/**
 * Resolution-parameterised modularity
 *   Q = sum_c [ w_c / W - gamma * (s_c / 2W)^2 ]
 * with W the total edge weight, w_c the weight inside community c and s_c the
 * summed weighted degree of c. Returns 0 for a graph without edges.
 */
double modularity(const WeightedGraph &g, const Partition &p, double gamma = 1.0);

struct LouvainResult {
    Partition partition;
    /// Modularity of the flattened partition after each aggregation level.
    std::vector<double> level_modularity;
};

/**
 * Two-phase Louvain: greedy local moving followed by aggregation of
 * communities into super-nodes, repeated until a level gains less than
 * min_modularity_gain or max_passes levels ran. The visiting order of each
 * level is a permutation drawn from `seed`. Among equal-gain targets the
 * current community wins, otherwise the lowest community id.
 */
LouvainResult run_louvain(const WeightedGraph &g, const LouvainConfig &config = {});
Partition louvain(const WeightedGraph &g, const LouvainConfig &config = {});

/// NMI with arithmetic-mean normalisation. Two trivial (single-block) labelings score 1.
double nmi(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
double nmi(const Partition &a, const Partition &b);

} // namespace sinr
