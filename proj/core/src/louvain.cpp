#include <algorithm>
#include <numeric>

#include "sinr/community.hpp"
#include "sinr/error.hpp"
#include "sinr/random.hpp"

namespace sinr {

double modularity(const WeightedGraph &g, const Partition &p, double gamma) {
    if (p.node_count() != g.node_count()) {
        throw ValidationError("modularity: partition covers " + std::to_string(p.node_count()) +
                              " nodes, graph has " + std::to_string(g.node_count()));
    }
    const double total = g.total_weight();
    if (total <= 0.0) return 0.0;
    std::vector<double> inside(p.community_count(), 0.0);
    std::vector<double> strength(p.community_count(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) strength[p.community_of(u)] += g.weighted_degree(u);
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
        if (p.community_of(u) == p.community_of(v)) inside[p.community_of(u)] += w;
    });
    double q = 0.0;
    for (std::size_t c = 0; c < inside.size(); ++c) {
        const double share = strength[c] / (2.0 * total);
        q += inside[c] / total - gamma * share * share;
    }
    return q;
}

namespace {

// Level graph of the aggregation hierarchy. Unlike WeightedGraph it carries
// self-loops: loop[i] is the weight internal to super-node i, counted once.
struct LevelGraph {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> targets;
    std::vector<double> weights;
    std::vector<double> loop;
    std::vector<double> strength; // incident weight + 2 * loop

    std::size_t size() const { return loop.size(); }
};

LevelGraph from_graph(const WeightedGraph &g) {
    LevelGraph lg;
    lg.offsets.assign(g.offsets().begin(), g.offsets().end());
    lg.targets.assign(g.targets().begin(), g.targets().end());
    lg.weights.assign(g.all_weights().begin(), g.all_weights().end());
    lg.loop.assign(g.node_count(), 0.0);
    lg.strength.resize(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) lg.strength[u] = g.weighted_degree(u);
    return lg;
}

struct MoveOutcome {
    std::vector<CommunityId> community;
    bool moved = false;
};

MoveOutcome local_moving(const LevelGraph &lg, double total, const LouvainConfig &cfg, Rng &rng) {
    const std::size_t n = lg.size();
    MoveOutcome out;
    out.community.resize(n);
    std::iota(out.community.begin(), out.community.end(), CommunityId{0});
    std::vector<double> tot(lg.strength);
    std::vector<double> link(n, -1.0);
    std::vector<CommunityId> touched;

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    shuffle(order.begin(), order.end(), rng);

    const double scale = cfg.gamma / (2.0 * total);
    while (true) {
        std::size_t moves = 0;
        double sweep_gain = 0.0;
        for (NodeId i : order) {
            const CommunityId current = out.community[i];
            const double ki = lg.strength[i];
            for (std::size_t e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
                const CommunityId c = out.community[lg.targets[e]];
                if (link[c] < 0.0) {
                    link[c] = 0.0;
                    touched.push_back(c);
                }
                link[c] += lg.weights[e];
            }
            tot[current] -= ki;
            const double current_gain = std::max(link[current], 0.0) - tot[current] * ki * scale;
            CommunityId best = current;
            double best_gain = current_gain;
            for (CommunityId c : touched) {
                if (c == current) continue;
                const double gain = link[c] - tot[c] * ki * scale;
                if (gain > best_gain || (gain == best_gain && best != current && c < best)) {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += ki;
            out.community[i] = best;
            if (best != current) {
                ++moves;
                sweep_gain += (best_gain - current_gain) / total;
            }
            for (CommunityId c : touched) link[c] = -1.0;
            touched.clear();
        }
        if (moves > 0) out.moved = true;
        if (moves == 0 || sweep_gain < cfg.min_modularity_gain) break;
    }
    return out;
}

// Renumbers communities by first appearance and returns the count.
std::size_t compact(std::vector<CommunityId> &community) {
    std::vector<CommunityId> remap(community.size(), UINT32_MAX);
    CommunityId next = 0;
    for (auto &c : community) {
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

LevelGraph aggregate(const LevelGraph &lg, const std::vector<CommunityId> &community, std::size_t k) {
    std::vector<std::vector<NodeId>> members(k);
    for (NodeId i = 0; i < lg.size(); ++i) members[community[i]].push_back(i);

    LevelGraph out;
    out.loop.assign(k, 0.0);
    out.strength.assign(k, 0.0);
    out.offsets.assign(1, 0);
    std::vector<double> acc(k, 0.0);
    std::vector<CommunityId> touched;
    for (CommunityId c = 0; c < k; ++c) {
        for (NodeId i : members[c]) {
            out.loop[c] += lg.loop[i];
            out.strength[c] += lg.strength[i];
            for (std::size_t e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
                const CommunityId d = community[lg.targets[e]];
                if (d == c) {
                    out.loop[c] += lg.weights[e] / 2.0;
                    continue;
                }
                if (acc[d] == 0.0) touched.push_back(d);
                acc[d] += lg.weights[e];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (CommunityId d : touched) {
            out.targets.push_back(d);
            out.weights.push_back(acc[d]);
            acc[d] = 0.0;
        }
        touched.clear();
        out.offsets.push_back(out.targets.size());
    }
    return out;
}

} // namespace

LouvainResult run_louvain(const WeightedGraph &g, const LouvainConfig &config) {
    if (!(config.gamma > 0.0)) throw ValidationError("louvain: gamma must be > 0");
    if (g.empty()) throw ValidationError("louvain: empty graph");

    const std::size_t n = g.node_count();
    std::vector<CommunityId> flat(n);
    std::iota(flat.begin(), flat.end(), CommunityId{0});
    LouvainResult result;
    const double total = g.total_weight();
    if (total <= 0.0) {
        result.partition = Partition(flat);
        return result;
    }

    Rng rng(config.seed);
    LevelGraph level = from_graph(g);
    double previous = modularity(g, Partition(flat), config.gamma);

    for (std::size_t pass = 0; pass < config.max_passes; ++pass) {
        auto moved = local_moving(level, total, config, rng);
        if (!moved.moved) break;
        const std::size_t k = compact(moved.community);
        for (auto &c : flat) c = moved.community[c];
        const double q = modularity(g, Partition(flat), config.gamma);
        result.level_modularity.push_back(q);
        if (k == level.size() || q - previous < config.min_modularity_gain) break;
        previous = q;
        level = aggregate(level, moved.community, k);
    }
    result.partition = Partition(flat);
    return result;
}

Partition louvain(const WeightedGraph &g, const LouvainConfig &config) {
    return run_louvain(g, config).partition;
}

} // namespace sinr
