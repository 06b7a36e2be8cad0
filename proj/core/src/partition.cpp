#include "sinr/partition.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "sinr/error.hpp"
#include "text_util.hpp"

namespace sinr {

Partition::Partition(std::span<const std::uint32_t> assignment) {
    std::unordered_map<std::uint32_t, CommunityId> relabel;
    assignment_.reserve(assignment.size());
    for (auto raw : assignment) {
        auto [it, inserted] = relabel.try_emplace(raw, static_cast<CommunityId>(relabel.size()));
        assignment_.push_back(it->second);
    }
    const std::size_t k = relabel.size();
    offsets_.assign(k + 1, 0);
    for (auto c : assignment_) ++offsets_[c + 1];
    for (std::size_t c = 0; c < k; ++c) offsets_[c + 1] += offsets_[c];
    members_.resize(assignment_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (NodeId u = 0; u < assignment_.size(); ++u) members_[cursor[assignment_[u]]++] = u;
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::uint32_t> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<std::uint32_t>(i);
    return Partition(a);
}

Partition Partition::single_community(std::size_t n) {
    std::vector<std::uint32_t> a(n, 0);
    return Partition(a);
}

std::span<const NodeId> Partition::members(CommunityId c) const {
    if (c >= community_count()) throw std::out_of_range("community " + std::to_string(c) + " out of range");
    return {members_.data() + offsets_[c], offsets_[c + 1] - offsets_[c]};
}

void write_partition(const Partition &p, const NodeLabelMap &labels, std::ostream &out) {
    if (labels.size() != p.node_count()) throw ValidationError("partition and label map sizes differ");
    for (NodeId u = 0; u < p.node_count(); ++u) out << labels.label(u) << '\t' << p.community_of(u) << '\n';
}

void save_partition(const Partition &p, const NodeLabelMap &labels, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    write_partition(p, labels, out);
}

Partition read_partition(std::istream &in, const NodeLabelMap &labels, std::string_view source) {
    std::vector<std::uint32_t> raw(labels.size(), UINT32_MAX);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (detail::is_comment(text)) continue;
        const auto fields = detail::split_fields(text);
        std::uint32_t community = 0;
        if (fields.size() != 2 || !detail::parse_int(fields[1], community)) {
            throw ParseError(std::string(source), line_no, "expected 'label<TAB>community_id'");
        }
        const auto id = labels.find(fields[0]);
        if (!id) throw ParseError(std::string(source), line_no, "unknown node '" + std::string(fields[0]) + "'");
        if (raw[*id] != UINT32_MAX) throw ParseError(std::string(source), line_no, "node listed twice");
        raw[*id] = community;
    }
    for (NodeId u = 0; u < raw.size(); ++u) {
        if (raw[u] == UINT32_MAX) throw ValidationError("partition misses node '" + labels.label(u) + "'");
    }
    return Partition(raw);
}

Partition load_partition(const std::filesystem::path &path, const NodeLabelMap &labels) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_partition(in, labels, path.string());
}

} // namespace sinr
