#include "sinr/embed.hpp"

#include <algorithm>

namespace sinr {

namespace {

void check_cover(const WeightedGraph &g, const Partition &p) {
    if (p.node_count() != g.node_count()) {
        throw ValidationError("partition covers " + std::to_string(p.node_count()) + " nodes, graph has " +
                              std::to_string(g.node_count()));
    }
}

// Appends the recall row of u, reusing `mass` (sized community_count, all
// zero on entry and on exit) as the accumulator.
void recall_row(const WeightedGraph &g, const Partition &p, NodeId u, std::vector<double> &mass,
                std::vector<CommunityId> &touched, SparseRow &row) {
    const double degree = g.weighted_degree(u);
    if (degree <= 0.0) {
        throw ValidationError("node '" + g.labels().label(u) + "' is isolated; node recall is undefined");
    }
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    touched.clear();
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const CommunityId c = p.community_of(nbrs[i]);
        if (mass[c] == 0.0) touched.push_back(c);
        mass[c] += ws[i];
    }
    row.clear();
    for (CommunityId c : touched) {
        row.push_back({c, mass[c] / degree});
        mass[c] = 0.0;
    }
}

} // namespace

SparseRow node_recall(const WeightedGraph &g, const Partition &p, NodeId u) {
    check_cover(g, p);
    std::vector<double> mass(p.community_count(), 0.0);
    std::vector<CommunityId> touched;
    SparseRow row;
    recall_row(g, p, u, mass, touched, row);
    std::sort(row.begin(), row.end(), [](const SparseEntry &a, const SparseEntry &b) { return a.dim < b.dim; });
    return row;
}

SparseEmbedding sinr_nr(const WeightedGraph &g, const Partition &p) {
    check_cover(g, p);
    std::vector<double> mass(p.community_count(), 0.0);
    std::vector<CommunityId> touched;
    std::vector<SparseRow> rows(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) recall_row(g, p, u, mass, touched, rows[u]);
    return SparseEmbedding(p.community_count(), std::move(rows), g.labels());
}

} // namespace sinr
