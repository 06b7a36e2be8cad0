#include "sinr/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sinr/error.hpp"

namespace sinr {

SparseEmbedding::SparseEmbedding(std::size_t cols, std::vector<SparseRow> rows, NodeLabelMap labels)
    : cols_(cols) {
    if (!labels.empty() && labels.size() != rows.size()) {
        throw ValidationError("embedding has " + std::to_string(rows.size()) + " rows but " +
                              std::to_string(labels.size()) + " labels");
    }
    labels_ = labels.empty() ? NodeLabelMap::identity(rows.size()) : std::move(labels);
    offsets_.reserve(rows.size() + 1);
    for (auto &row : rows) {
        std::sort(row.begin(), row.end(), [](const SparseEntry &a, const SparseEntry &b) { return a.dim < b.dim; });
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto &entry = row[i];
            if (entry.dim >= cols) throw ValidationError("dimension " + std::to_string(entry.dim) + " out of range");
            if (!std::isfinite(entry.value) || entry.value < 0.0) {
                throw ValidationError("embedding values must be finite and nonnegative");
            }
            if (i > 0 && row[i - 1].dim == entry.dim) throw ValidationError("repeated dimension in a row");
            if (entry.value > 0.0) entries_.push_back(entry);
        }
        offsets_.push_back(entries_.size());
    }
}

std::span<const SparseEntry> SparseEmbedding::row(NodeId u) const {
    if (u >= rows()) throw std::out_of_range("row " + std::to_string(u) + " out of range");
    return {entries_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

double SparseEmbedding::value(NodeId u, DimensionId d) const {
    const auto r = row(u);
    auto it = std::lower_bound(r.begin(), r.end(), d, [](const SparseEntry &e, DimensionId x) { return e.dim < x; });
    return (it != r.end() && it->dim == d) ? it->value : 0.0;
}

double SparseEmbedding::norm(NodeId u) const {
    double s = 0.0;
    for (const auto &e : row(u)) s += e.value * e.value;
    return std::sqrt(s);
}

std::vector<double> SparseEmbedding::dense_row(NodeId u) const {
    std::vector<double> out(cols_, 0.0);
    for (const auto &e : row(u)) out[e.dim] = e.value;
    return out;
}

void SparseEmbedding::set_dimension_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != cols_) throw ValidationError("one dimension label per column expected");
    dimension_labels_ = std::move(labels);
}

double cosine_similarity(const SparseEmbedding &e, NodeId u, NodeId v) {
    const double nu = e.norm(u);
    const double nv = e.norm(v);
    if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine similarity of an all-zero row");
    const auto a = e.row(u);
    const auto b = e.row(v);
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].dim < b[j].dim) {
            ++i;
        } else if (b[j].dim < a[i].dim) {
            ++j;
        } else {
            dot += a[i++].value * b[j++].value;
        }
    }
    return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

NeighborIndex::NeighborIndex(const SparseEmbedding &e) : e_(&e) {
    col_offsets_.assign(e.cols() + 1, 0);
    norms_.resize(e.rows());
    for (NodeId u = 0; u < e.rows(); ++u) {
        norms_[u] = e.norm(u);
        for (const auto &entry : e.row(u)) ++col_offsets_[entry.dim + 1];
    }
    for (std::size_t d = 0; d < e.cols(); ++d) col_offsets_[d + 1] += col_offsets_[d];
    col_rows_.resize(e.nnz());
    col_values_.resize(e.nnz());
    std::vector<std::size_t> cursor(col_offsets_.begin(), col_offsets_.end() - 1);
    for (NodeId u = 0; u < e.rows(); ++u) {
        for (const auto &entry : e.row(u)) {
            const std::size_t at = cursor[entry.dim]++;
            col_rows_[at] = u;
            col_values_[at] = entry.value;
        }
    }
}

std::vector<double> NeighborIndex::similarities(NodeId u) const {
    std::vector<double> sim(e_->rows(), 0.0);
    const double nu = norms_.at(u);
    if (nu == 0.0) throw ValidationError("similarity query on an all-zero row");
    for (const auto &entry : e_->row(u)) {
        for (std::size_t i = col_offsets_[entry.dim]; i < col_offsets_[entry.dim + 1]; ++i) {
            sim[col_rows_[i]] += entry.value * col_values_[i];
        }
    }
    for (NodeId v = 0; v < sim.size(); ++v) {
        if (sim[v] != 0.0) sim[v] = std::clamp(sim[v] / (nu * norms_[v]), -1.0, 1.0);
    }
    return sim;
}

std::vector<Neighbor> NeighborIndex::top_k(NodeId u, std::size_t k) const {
    const auto sim = similarities(u);
    std::vector<Neighbor> scored;
    std::vector<bool> seen(sim.size(), false);
    for (const auto &entry : e_->row(u)) {
        for (std::size_t i = col_offsets_[entry.dim]; i < col_offsets_[entry.dim + 1]; ++i) {
            const NodeId v = col_rows_[i];
            if (v == u || seen[v]) continue;
            seen[v] = true;
            scored.push_back({v, sim[v]});
        }
    }
    const auto before = [](const Neighbor &a, const Neighbor &b) {
        return a.similarity != b.similarity ? a.similarity > b.similarity : a.node < b.node;
    };
    if (scored.size() > k) {
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), before);
        scored.resize(k);
    } else {
        std::sort(scored.begin(), scored.end(), before);
    }
    for (NodeId v = 0; v < sim.size() && scored.size() < k; ++v) {
        if (v != u && !seen[v] && norms_[v] > 0.0) scored.push_back({v, 0.0});
    }
    return scored;
}

std::vector<Neighbor> top_k_neighbors(const SparseEmbedding &e, NodeId u, std::size_t k) {
    return NeighborIndex(e).top_k(u, k);
}

} // namespace sinr
