#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sinr/graph.hpp"

namespace sinr {

using DimensionId = std::uint32_t;

struct SparseEntry {
    DimensionId dim;
    double value;

    bool operator==(const SparseEntry &) const = default;
};

using SparseRow = std::vector<SparseEntry>;

/**
 * Row-sparse nonnegative matrix: one row per node or word, one column per
 * community. Rows are sorted by dimension and never store zeros.
 */
class SparseEmbedding {
public:
    SparseEmbedding() = default;

    /// Sorts each row, drops zeros; throws ValidationError on negative or
    /// non-finite values, out-of-range or repeated dimensions.
    SparseEmbedding(std::size_t cols, std::vector<SparseRow> rows, NodeLabelMap labels = {});

    std::size_t rows() const noexcept { return offsets_.size() - 1; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return entries_.size(); }

    std::span<const SparseEntry> row(NodeId u) const;
    double value(NodeId u, DimensionId d) const;
    double norm(NodeId u) const;
    std::vector<double> dense_row(NodeId u) const;

    const NodeLabelMap &labels() const noexcept { return labels_; }
    std::optional<NodeId> find(std::string_view label) const { return labels_.find(label); }

    /// Optional human-readable descriptor per dimension (not serialised).
    const std::vector<std::string> &dimension_labels() const noexcept { return dimension_labels_; }
    void set_dimension_labels(std::vector<std::string> labels);

    bool operator==(const SparseEmbedding &other) const {
        return cols_ == other.cols_ && offsets_ == other.offsets_ && entries_ == other.entries_ &&
               labels_ == other.labels_;
    }

private:
    std::size_t cols_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<SparseEntry> entries_;
    NodeLabelMap labels_;
    std::vector<std::string> dimension_labels_;
};

/// Cosine between rows u and v. Throws ValidationError when a row is all zeros.
double cosine_similarity(const SparseEmbedding &e, NodeId u, NodeId v);

struct Neighbor {
    NodeId node;
    double similarity;
};

/**
 * Column index over an embedding for repeated nearest-neighbour queries.
 * Only rows sharing a dimension with the query are scored; the remaining rows
 * have similarity 0 and fill the tail of a ranking in ascending id order.
 */
class NeighborIndex {
public:
    explicit NeighborIndex(const SparseEmbedding &e);

    /// k most similar rows to u (u excluded), descending similarity, ties by
    /// ascending id. Rows that are all zeros are never returned.
    std::vector<Neighbor> top_k(NodeId u, std::size_t k) const;

    /// Similarity of u against every row (0 for rows without shared support).
    std::vector<double> similarities(NodeId u) const;

private:
    const SparseEmbedding *e_;
    std::vector<std::size_t> col_offsets_;
    std::vector<NodeId> col_rows_;
    std::vector<double> col_values_;
    std::vector<double> norms_;
};

std::vector<Neighbor> top_k_neighbors(const SparseEmbedding &e, NodeId u, std::size_t k);

// Text format: header "n k", then one line per row "label dim:value dim:value ...".
void write_embedding_text(const SparseEmbedding &e, std::ostream &out);
SparseEmbedding read_embedding_text(std::istream &in, std::string_view source = "<stream>");

// Binary cache with the same content: "SINREMBD", u32 version, u64 n, u64 k,
// u64 offsets[n+1], (u32 dim, f64 value)[nnz], n length-prefixed labels.
void write_embedding_binary(const SparseEmbedding &e, std::ostream &out);
SparseEmbedding read_embedding_binary(std::istream &in);

enum class EmbeddingFormat { text, binary };
void save_embedding(const SparseEmbedding &e, const std::filesystem::path &path,
                    EmbeddingFormat format = EmbeddingFormat::text);
/// Detects the format from the leading magic bytes.
SparseEmbedding load_embedding(const std::filesystem::path &path);

} // namespace sinr
