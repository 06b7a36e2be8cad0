#include <algorithm>
#include <cmath>
#include <vector>

#include "sinr/embed.hpp"
#include "sinr/random.hpp"

namespace sinr {

namespace {

// Adjacency rows regrouped by the community of the neighbor:
// for node u, blocks [block_offsets[u], block_offsets[u+1]) each hold the
// weights of u's neighbors inside one community.
struct GroupedRows {
    std::vector<std::size_t> block_offsets{0};
    std::vector<CommunityId> block_community;
    std::vector<std::size_t> value_offsets{0};
    std::vector<double> values;
};

GroupedRows group_rows(const WeightedGraph &g, const Partition &p) {
    GroupedRows out;
    std::vector<std::pair<CommunityId, double>> scratch;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        const auto ws = g.weights(u);
        scratch.clear();
        for (std::size_t i = 0; i < nbrs.size(); ++i) scratch.emplace_back(p.community_of(nbrs[i]), ws[i]);
        std::stable_sort(scratch.begin(), scratch.end(),
                         [](const auto &a, const auto &b) { return a.first < b.first; });
        for (std::size_t i = 0; i < scratch.size(); ++i) {
            if (i == 0 || scratch[i].first != scratch[i - 1].first) {
                if (i > 0) out.value_offsets.push_back(out.values.size());
                out.block_community.push_back(scratch[i].first);
            }
            out.values.push_back(scratch[i].second);
        }
        if (!scratch.empty()) out.value_offsets.push_back(out.values.size());
        out.block_offsets.push_back(out.block_community.size());
    }
    return out;
}

void check_inputs(const WeightedGraph &g, const Partition &p) {
    if (p.node_count() != g.node_count()) throw ValidationError("partition does not cover the graph");
}

} // namespace

double mf_loss(const WeightedGraph &g, const Partition &p, const std::vector<double> &u) {
    check_inputs(g, p);
    const std::size_t n = g.node_count();
    const std::size_t k = p.community_count();
    if (u.size() != n * k) throw ValidationError("factor matrix has the wrong shape");
    if (n == 0) return 0.0;
    // Sum over (u, c) of sum_{v in C_c} (A_uv - x)^2 = Q - 2 x S + |C_c| x^2.
    double total = 0.0;
    std::vector<double> s(k, 0.0);
    for (NodeId a = 0; a < n; ++a) {
        const auto nbrs = g.neighbors(a);
        const auto ws = g.weights(a);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            s[p.community_of(nbrs[i])] += ws[i];
            total += ws[i] * ws[i];
        }
        const double *x = u.data() + a * k;
        for (CommunityId c = 0; c < k; ++c) {
            total += x[c] * (static_cast<double>(p.community_size(c)) * x[c] - 2.0 * s[c]);
            s[c] = 0.0;
        }
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

MfResult sinr_mf(const WeightedGraph &g, const Partition &p, const MfConfig &config) {
    check_inputs(g, p);
    if (config.epochs == 0) throw ValidationError("MF needs at least one epoch");
    if (!(config.learning_rate > 0.0)) throw ValidationError("MF learning rate must be > 0");
    if (!(config.init_scale >= 0.0)) throw ValidationError("MF init scale must be >= 0");
    const std::size_t n = g.node_count();
    if (n > config.max_nodes) {
        throw ValidationError("MF is limited to " + std::to_string(config.max_nodes) + " nodes, graph has " +
                              std::to_string(n));
    }
    const std::size_t k = p.community_count();

    Rng rng(config.seed);
    std::vector<double> factors(n * k);
    for (auto &x : factors) x = config.init_scale * uniform_real(rng);

    const GroupedRows rows = group_rows(g, p);
    // One SGD step on cell (u, v) with c = c(v): x <- x + lr * 2 (A_uv - x).
    const double alpha = 2.0 * config.learning_rate;
    const double beta = 1.0 - alpha;
    std::vector<double> beta_pow_size(k);
    std::size_t largest = 0;
    for (CommunityId c = 0; c < k; ++c) {
        beta_pow_size[c] = std::pow(beta, static_cast<double>(p.community_size(c)));
        largest = std::max(largest, p.community_size(c));
    }
    std::vector<double> beta_pow(largest + 1, 1.0);
    for (std::size_t i = 1; i <= largest; ++i) beta_pow[i] = beta_pow[i - 1] * beta;

    std::vector<char> taken(largest, 0);
    std::vector<std::size_t> positions;

    MfResult result;
    result.loss_trace.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (NodeId u = 0; u < n; ++u) {
            double *x = factors.data() + static_cast<std::size_t>(u) * k;
            // Cells of row u hitting community c are |C_c| steps on x[c]; the
            // random order of the row places the r nonzero cells of C_c at a
            // uniformly random r-subset of those |C_c| steps.
            std::size_t b = rows.block_offsets[u];
            for (CommunityId c = 0; c < k; ++c) {
                if (b < rows.block_offsets[u + 1] && rows.block_community[b] == c) {
                    const std::size_t size = p.community_size(c);
                    const std::size_t first = rows.value_offsets[b];
                    const std::size_t r = rows.value_offsets[b + 1] - first;
                    positions.clear();
                    for (std::size_t j = size - r; j < size; ++j) {
                        const auto t = static_cast<std::size_t>(uniform_index(rng, j + 1));
                        const std::size_t pick = taken[t] ? j : t;
                        taken[pick] = 1;
                        positions.push_back(pick);
                    }
                    shuffle(positions.begin(), positions.end(), rng);
                    double acc = beta_pow_size[c] * x[c];
                    for (std::size_t j = 0; j < r; ++j) {
                        acc += alpha * beta_pow[size - 1 - positions[j]] * rows.values[first + j];
                        taken[positions[j]] = 0;
                    }
                    x[c] = acc;
                    ++b;
                } else {
                    x[c] *= beta_pow_size[c];
                }
            }
        }
        const double loss = mf_loss(g, p, factors);
        if (!std::isfinite(loss)) {
            throw DivergenceError("MF diverged at epoch " + std::to_string(epoch + 1) +
                                  "; try a smaller learning rate than " + std::to_string(config.learning_rate));
        }
        result.loss_trace.push_back(loss);
    }

    std::vector<SparseRow> out(n);
    for (NodeId u = 0; u < n; ++u) {
        for (CommunityId c = 0; c < k; ++c) {
            const double v = factors[static_cast<std::size_t>(u) * k + c];
            if (v > 0.0) out[u].push_back({c, v});
        }
    }
    result.embedding = SparseEmbedding(k, std::move(out), g.labels());
    return result;
}

} // namespace sinr
