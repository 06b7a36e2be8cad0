#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "sinr/graph.hpp"

namespace sinr {

/**
 * Reads an edge list with one "src<TAB>dst[<TAB>weight]" row per line.
 *
 * Lines without a tab are split on whitespace. Blank lines and lines starting
 * with '#' or '%' are skipped. Labels receive contiguous ids in first-seen
 * order; duplicate rows sum their weights and self-loops are dropped. With
 * `weighted == false` any third column is ignored and every row counts 1.
 *
 * Throws ParseError (with line number) on malformed rows and ValidationError
 * on negative weights.
 */
WeightedGraph read_edge_list(std::istream &in, bool weighted, std::string_view source = "<stream>");
WeightedGraph load_edge_list(const std::filesystem::path &path, bool weighted);

/// Writes "label<TAB>label[<TAB>weight]" rows, one per undirected edge.
void write_edge_list(const WeightedGraph &g, std::ostream &out, bool with_weights = true);
void save_edge_list(const WeightedGraph &g, const std::filesystem::path &path, bool with_weights = true);

// Binary cache: "SINRGRPH", u32 version, u64 n, u64 2m, u64 offsets[n+1],
// u32 targets[2m], f64 weights[2m], then n length-prefixed labels. Little-endian.
void write_graph_binary(const WeightedGraph &g, std::ostream &out);
WeightedGraph read_graph_binary(std::istream &in);
void save_graph_binary(const WeightedGraph &g, const std::filesystem::path &path);
WeightedGraph load_graph_binary(const std::filesystem::path &path);

/// Loads either format, sniffing the binary magic.
WeightedGraph load_graph(const std::filesystem::path &path, bool weighted);

} // namespace sinr
