#include "sinr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "sinr/error.hpp"
#include "sinr/random.hpp"

namespace sinr {

namespace {

KMeansResult lloyd(const Eigen::MatrixXd &points, std::size_t k, const KMeansConfig &config, Rng &rng) {
    const auto n = points.rows();
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd centroids(kk, points.cols());

    // k-means++ seeding
    std::vector<double> closest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    auto first = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    centroids.row(0) = points.row(first);
    for (Eigen::Index c = 1; c < kk; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = (points.row(i) - centroids.row(c - 1)).squaredNorm();
            closest[static_cast<std::size_t>(i)] = std::min(closest[static_cast<std::size_t>(i)], d);
            total += closest[static_cast<std::size_t>(i)];
        }
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double target = uniform_real(rng) * total;
            for (pick = 0; pick < n - 1; ++pick) {
                target -= closest[static_cast<std::size_t>(pick)];
                if (target < 0.0) break;
            }
        } else {
            pick = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
        }
        centroids.row(c) = points.row(pick);
    }

    KMeansResult result;
    result.labels.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            (centroids.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
            result.labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best);
        }
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(kk, points.cols());
        std::vector<std::size_t> sizes(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            next.row(result.labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++sizes[result.labels[static_cast<std::size_t>(i)]];
        }
        for (Eigen::Index c = 0; c < kk; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) {
                next.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
            } else {
                next.row(c) = centroids.row(c);
            }
        }
        const double shift = (next - centroids).rowwise().squaredNorm().maxCoeff();
        centroids = std::move(next);
        if (shift <= config.tolerance) break;
    }
    result.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        result.inertia += (centroids.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
        result.labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best);
    }
    result.centroids = std::move(centroids);
    return result;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd &points, std::size_t k, const KMeansConfig &config) {
    if (k == 0) throw ValidationError("k-means needs k >= 1");
    if (points.rows() < static_cast<Eigen::Index>(k)) throw ValidationError("k-means needs at least k points");
    if (config.restarts == 0) throw ValidationError("k-means needs at least one restart");
    Rng rng(config.seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < config.restarts; ++r) {
        auto candidate = lloyd(points, k, config, rng);
        if (candidate.inertia < best.inertia) best = std::move(candidate);
    }
    return best;
}

std::vector<std::uint32_t> agglomerative_average_cosine(const Eigen::MatrixXd &points, std::size_t k) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k == 0 || k > n) throw ValidationError("agglomerative clustering needs 1 <= k <= n");
    const Eigen::MatrixXd z = normalize_rows(points);
    Eigen::MatrixXd dist = Eigen::MatrixXd::Ones(points.rows(), points.rows()) - z * z.transpose();
    dist = dist.cwiseMax(0.0);

    std::vector<std::size_t> size(n, 1);
    std::vector<bool> alive(n, true);
    std::vector<std::uint32_t> owner(n);
    for (std::size_t i = 0; i < n; ++i) owner[i] = static_cast<std::uint32_t>(i);

    for (std::size_t clusters = n; clusters > k; --clusters) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const double d = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        // Lance-Williams update for average linkage; bj merges into bi.
        const double wi = static_cast<double>(size[bi]);
        const double wj = static_cast<double>(size[bj]);
        for (std::size_t t = 0; t < n; ++t) {
            if (!alive[t] || t == bi || t == bj) continue;
            const auto ti = static_cast<Eigen::Index>(t);
            const double d = (wi * dist(static_cast<Eigen::Index>(bi), ti) + wj * dist(static_cast<Eigen::Index>(bj), ti)) /
                             (wi + wj);
            dist(static_cast<Eigen::Index>(bi), ti) = d;
            dist(ti, static_cast<Eigen::Index>(bi)) = d;
        }
        size[bi] += size[bj];
        alive[bj] = false;
        for (auto &o : owner) {
            if (o == bj) o = static_cast<std::uint32_t>(bi);
        }
    }
    std::unordered_map<std::uint32_t, std::uint32_t> relabel;
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = relabel.try_emplace(owner[i], static_cast<std::uint32_t>(relabel.size())).first->second;
    }
    return labels;
}

double purity(std::span<const std::uint32_t> clusters, std::span<const std::uint32_t> categories) {
    if (clusters.size() != categories.size()) throw ValidationError("cluster and category counts differ");
    if (clusters.empty()) throw ValidationError("purity of an empty clustering");
    std::unordered_map<std::uint64_t, std::size_t> joint;
    for (std::size_t i = 0; i < clusters.size(); ++i) ++joint[(std::uint64_t{clusters[i]} << 32) | categories[i]];
    std::unordered_map<std::uint32_t, std::size_t> majority;
    for (const auto &[key, count] : joint) {
        auto &m = majority[static_cast<std::uint32_t>(key >> 32)];
        m = std::max(m, count);
    }
    std::size_t total = 0;
    for (const auto &[cluster, count] : majority) total += count;
    return static_cast<double>(total) / static_cast<double>(clusters.size());
}

Eigen::MatrixXd normalize_rows(Eigen::MatrixXd points) {
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        const double norm = points.row(r).norm();
        if (norm > 0.0) points.row(r) /= norm;
    }
    return points;
}

std::vector<std::uint32_t> spectral_clustering(const SparseEmbedding &e, std::size_t k, std::uint64_t seed,
                                               double affinity_floor) {
    const auto n = static_cast<Eigen::Index>(e.rows());
    if (k == 0 || static_cast<Eigen::Index>(k) > n) throw ValidationError("spectral clustering needs 1 <= k <= n");
    if (!(affinity_floor > 0.0)) throw ValidationError("affinity floor must be > 0");
    const auto d = static_cast<Eigen::Index>(e.cols());

    // Thin factor Y with S = Y Y^T.
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, d + 1);
    for (Eigen::Index u = 0; u < n; ++u) {
        const double norm = e.norm(static_cast<NodeId>(u));
        if (norm > 0.0) {
            for (const auto &entry : e.row(static_cast<NodeId>(u))) y(u, entry.dim) = entry.value / norm;
        }
        y(u, d) = std::sqrt(affinity_floor);
    }
    const Eigen::VectorXd degree = y * (y.transpose() * Eigen::VectorXd::Ones(n));
    const Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
    y = inv_sqrt.asDiagonal() * y;

    // Left singular vectors of Y from the eigen-decomposition of Y^T Y.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(y.transpose() * y);
    const auto cols = y.cols();
    const auto take = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), cols);
    Eigen::MatrixXd spectral = Eigen::MatrixXd::Zero(n, take);
    for (Eigen::Index j = 0; j < take; ++j) {
        const Eigen::Index src = cols - 1 - j; // eigenvalues ascend
        const double lambda = eig.eigenvalues()(src);
        if (lambda <= 1e-14) break;
        spectral.col(j) = y * eig.eigenvectors().col(src) / std::sqrt(lambda);
    }
    spectral = inv_sqrt.asDiagonal() * spectral;
    KMeansConfig config;
    config.seed = seed;
    return kmeans(spectral, k, config).labels;
}

} // namespace sinr
