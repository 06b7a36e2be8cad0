#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sinr/embedding.hpp"

namespace sinr {

struct KMeansConfig {
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    double tolerance = 1e-10; ///< stop when no centroid moves more than this (squared)
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<std::uint32_t> labels;
    Eigen::MatrixXd centroids; ///< k x d
    double inertia = 0.0;      ///< sum of squared distances to the assigned centroid
};

/// Lloyd's algorithm from k-means++ seeds; keeps the restart with the lowest inertia.
KMeansResult kmeans(const Eigen::MatrixXd &points, std::size_t k, const KMeansConfig &config = {});

/// Average-linkage agglomerative clustering under cosine distance, cut at k clusters.
std::vector<std::uint32_t> agglomerative_average_cosine(const Eigen::MatrixXd &points, std::size_t k);

/// Share of items whose cluster's majority category is their own.
double purity(std::span<const std::uint32_t> clusters, std::span<const std::uint32_t> categories);

/// Scales every nonzero row to unit Euclidean norm.
Eigen::MatrixXd normalize_rows(Eigen::MatrixXd points);

/**
 * Normalised spectral clustering of the rows of `e` with the cosine affinity
 * S = Z Z^T + floor, Z the row-normalised embedding. The top-k eigenvectors of
 * D^-1/2 S D^-1/2 are recovered from the thin factor D^-1/2 [Z, sqrt(floor)],
 * so S is never materialised. The spectral coordinates are rescaled by
 * D^-1/2 and clustered with k-means.
 */
std::vector<std::uint32_t> spectral_clustering(const SparseEmbedding &e, std::size_t k, std::uint64_t seed,
                                               double affinity_floor = 1e-12);

} // namespace sinr
