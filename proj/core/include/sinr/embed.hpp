#pragma once

#include <cstdint>
#include <vector>

#include "sinr/embedding.hpp"
#include "sinr/error.hpp"
#include "sinr/graph.hpp"
#include "sinr/partition.hpp"

namespace sinr {

/**
 * Node recall of u toward every community it touches:
 *   NR_i(u) = (sum of w(u, v) over v in C_i) / d_w(u).
 * Throws ValidationError for an isolated node.
 */
SparseRow node_recall(const WeightedGraph &g, const Partition &p, NodeId u);

/// One node-recall row per node, one dimension per community. O(n + m).
SparseEmbedding sinr_nr(const WeightedGraph &g, const Partition &p);

struct MfConfig {
    std::size_t epochs = 3000;
    double learning_rate = 5e-3;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    std::size_t max_nodes = 20000;
};

struct MfResult {
    SparseEmbedding embedding;
    std::vector<double> loss_trace; ///< MSE(A, U C^T) after each epoch
};

/// Raised when the loss stops being finite.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/**
 * Learns U minimising the mean squared error between the weighted adjacency
 * matrix A and U C^T, where C is the binary membership matrix of `p`.
 *
 * Each epoch is one pass of plain SGD over all n^2 cells of A, row by row,
 * with the cells of a row visited in a fresh random order. Because column v
 * of C^T selects the single coordinate U(u, c(v)), the updates for one
 * (u, c) coordinate form a linear recurrence that is evaluated in closed
 * form, so an epoch costs O(m + n k) instead of O(n^2).
 *
 * U starts uniform in [0, init_scale); negative coordinates are clamped to 0
 * only in the returned embedding. Rejects graphs above max_nodes.
 */
MfResult sinr_mf(const WeightedGraph &g, const Partition &p, const MfConfig &config = {});

/// MSE(A, U C^T) for a dense row-major U (n x k), computed in O(m + n k).
double mf_loss(const WeightedGraph &g, const Partition &p, const std::vector<double> &u);

} // namespace sinr
