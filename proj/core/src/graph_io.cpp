#include "sinr/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "file_util.hpp"
#include "sinr/error.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

constexpr char kGraphMagic[9] = "SINRGRPH";
constexpr std::uint32_t kGraphVersion = 1;

} // namespace

WeightedGraph read_edge_list(std::istream &in, bool weighted, std::string_view source) {
    GraphBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = detail::trim(line);
        if (detail::is_comment(text)) continue;
        const auto fields = detail::split_fields(text);
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError(std::string(source), line_no,
                             "expected 2 or 3 fields, found " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) throw ParseError(std::string(source), line_no, "empty node label");
        double w = 1.0;
        if (weighted && fields.size() == 3) {
            if (!detail::parse_double(fields[2], w)) {
                throw ParseError(std::string(source), line_no, "invalid weight '" + std::string(fields[2]) + "'");
            }
            if (w < 0.0) {
                throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": negative weight");
            }
        }
        try {
            builder.add_edge(fields[0], fields[1], w);
        } catch (const ValidationError &e) {
            throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return builder.build();
}

WeightedGraph load_edge_list(const std::filesystem::path &path, bool weighted) {
    auto in = detail::open_input(path);
    return read_edge_list(in, weighted, path.string());
}

void write_edge_list(const WeightedGraph &g, std::ostream &out, bool with_weights) {
    const auto &labels = g.labels();
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
        out << labels.label(u) << '\t' << labels.label(v);
        if (with_weights) out << '\t' << detail::format_double(w);
        out << '\n';
    });
}

void save_edge_list(const WeightedGraph &g, const std::filesystem::path &path, bool with_weights) {
    auto out = detail::open_output(path);
    write_edge_list(g, out, with_weights);
}

void write_graph_binary(const WeightedGraph &g, std::ostream &out) {
    out.write(kGraphMagic, 8);
    detail::write_le<std::uint32_t>(out, kGraphVersion);
    detail::write_le<std::uint64_t>(out, g.node_count());
    detail::write_le<std::uint64_t>(out, g.targets().size());
    for (std::size_t off : g.offsets()) detail::write_le<std::uint64_t>(out, off);
    for (NodeId v : g.targets()) detail::write_le<std::uint32_t>(out, v);
    for (double w : g.all_weights()) detail::write_le<double>(out, w);
    for (const auto &label : g.labels().labels()) detail::write_string(out, label);
}

WeightedGraph read_graph_binary(std::istream &in) {
    detail::expect_magic(in, kGraphMagic);
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != kGraphVersion) throw Error("unsupported graph cache version " + std::to_string(version));
    const auto n = detail::read_le<std::uint64_t>(in);
    const auto entries = detail::read_le<std::uint64_t>(in);
    std::vector<std::size_t> offsets(n + 1);
    for (auto &o : offsets) o = detail::read_le<std::uint64_t>(in);
    std::vector<NodeId> targets(entries);
    for (auto &t : targets) t = detail::read_le<std::uint32_t>(in);
    std::vector<double> weights(entries);
    for (auto &w : weights) w = detail::read_le<double>(in);
    NodeLabelMap labels;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (labels.intern(detail::read_string(in)) != i) throw Error("duplicate label in graph cache");
    }
    return WeightedGraph::from_csr(std::move(offsets), std::move(targets), std::move(weights), std::move(labels));
}

void save_graph_binary(const WeightedGraph &g, const std::filesystem::path &path) {
    auto out = detail::open_output(path, std::ios::binary);
    write_graph_binary(g, out);
}

WeightedGraph load_graph_binary(const std::filesystem::path &path) {
    auto in = detail::open_input(path, std::ios::binary);
    return read_graph_binary(in);
}

WeightedGraph load_graph(const std::filesystem::path &path, bool weighted) {
    if (detail::has_magic(path, kGraphMagic)) return load_graph_binary(path);
    return load_edge_list(path, weighted);
}

} // namespace sinr
