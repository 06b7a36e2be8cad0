#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sinr/graph.hpp"

namespace sinr {

using CommunityId = std::uint32_t;

/**
 * Node to community assignment. Community ids are contiguous in
 * [0, community_count()) and every community is non-empty: the constructor
 * relabels arbitrary ids by order of first appearance.
 */
class Partition {
public:
    Partition() = default;
    explicit Partition(std::span<const std::uint32_t> assignment);

    static Partition singletons(std::size_t n);
    static Partition single_community(std::size_t n);

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t community_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    CommunityId community_of(NodeId u) const { return assignment_.at(u); }
    std::span<const CommunityId> assignment() const noexcept { return assignment_; }
    /// Members in ascending node id order.
    std::span<const NodeId> members(CommunityId c) const;
    std::size_t community_size(CommunityId c) const { return members(c).size(); }

    bool operator==(const Partition &other) const { return assignment_ == other.assignment_; }

private:
    std::vector<CommunityId> assignment_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> members_;
};

/// "node_label<TAB>community_id", one line per node in id order.
void write_partition(const Partition &p, const NodeLabelMap &labels, std::ostream &out);
void save_partition(const Partition &p, const NodeLabelMap &labels, const std::filesystem::path &path);

/// Every label of `labels` must appear exactly once; unknown labels are errors.
Partition read_partition(std::istream &in, const NodeLabelMap &labels, std::string_view source = "<stream>");
Partition load_partition(const std::filesystem::path &path, const NodeLabelMap &labels);

} // namespace sinr
