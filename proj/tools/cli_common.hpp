#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinr/community.hpp"
#include "sinr/eval_graph.hpp"
#include "sinr/eval_report.hpp"
#include "sinr/graph.hpp"

namespace sinr::cli {

/// Options shared by every subcommand.
struct Context {
    std::uint64_t seed = 0;
    std::size_t jobs = 0; ///< 0 = hardware concurrency
    std::filesystem::path output_dir;
    std::filesystem::path data_dir = "data";
};

/// A graph given by path, or by dataset name (resolved to <data-dir>/<name>/edges.tsv).
struct GraphInput {
    std::string spec;
    bool weighted = false;

    std::filesystem::path path(const Context &ctx) const;
    std::string dataset_name() const;
    WeightedGraph load(const Context &ctx) const;
};

void add_graph_options(CLI::App &cmd, GraphInput &graph, bool required = true);

/// "auto" or a positive finite resolution.
struct GammaOption {
    std::string text = "auto";
    double resolve(std::size_t node_count) const;
};
void add_gamma_option(CLI::App &cmd, GammaOption &gamma);

std::vector<std::string> split_list(const std::string &text);

/// <output-dir>/<task>_<dataset>_<model>[_g<gamma>].json unless `explicit_path` is set.
std::filesystem::path report_path(const Context &ctx, const EvalReport &report, const std::string &explicit_path);
/// Saves the report and prints its summary line.
void emit_report(const Context &ctx, const EvalReport &report, const std::string &explicit_path);

/// Resolves a path against the output directory unless it is absolute.
std::filesystem::path output_path(const Context &ctx, const std::filesystem::path &p);

void add_build_commands(CLI::App &app, Context &ctx);
void add_eval_commands(CLI::App &app, Context &ctx);
void add_probe_commands(CLI::App &app, Context &ctx);
void add_fetch_command(CLI::App &app, Context &ctx);

} // namespace sinr::cli
