#include "cli_common.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "sinr/error.hpp"
#include "sinr/graph_io.hpp"

namespace sinr::cli {

std::filesystem::path GraphInput::path(const Context &ctx) const {
    const std::filesystem::path direct(spec);
    if (std::filesystem::exists(direct)) return direct;
    const auto named = ctx.data_dir / spec / "edges.tsv";
    if (std::filesystem::exists(named)) return named;
    throw Error("graph '" + spec + "' is neither a file nor a dataset under " + ctx.data_dir.string());
}

std::string GraphInput::dataset_name() const {
    const std::filesystem::path p(spec);
    if (p.has_extension() || p.has_parent_path()) {
        // data/<name>/edges.tsv -> <name>
        if (p.stem() == "edges" && p.has_parent_path()) return p.parent_path().filename().string();
        return p.stem().string();
    }
    return spec;
}

WeightedGraph GraphInput::load(const Context &ctx) const { return load_graph(path(ctx), weighted); }

void add_graph_options(CLI::App &cmd, GraphInput &graph, bool required) {
    auto *opt = cmd.add_option("--graph", graph.spec, "Edge list, binary graph, or dataset name");
    if (required) opt->required();
    cmd.add_flag("--weighted", graph.weighted, "Read a third column as edge weight");
}

double GammaOption::resolve(std::size_t node_count) const {
    if (text == "auto") return node_count < 10000 ? 1.0 : 5.0;
    return std::stod(text);
}

void add_gamma_option(CLI::App &cmd, GammaOption &gamma) {
    cmd.add_option("--gamma", gamma.text, "Louvain resolution, or 'auto' (1 below 10k nodes, else 5)")
        ->capture_default_str()
        ->check(CLI::Validator(
            [](std::string &value) -> std::string {
                if (value == "auto") return {};
                try {
                    std::size_t used = 0;
                    const double g = std::stod(value, &used);
                    if (used == value.size() && std::isfinite(g) && g > 0.0) return {};
                } catch (const std::exception &) {
                }
                return "gamma must be 'auto' or a positive number, got '" + value + "'";
            },
            "GAMMA"));
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::filesystem::path output_path(const Context &ctx, const std::filesystem::path &p) {
    if (p.is_absolute() || ctx.output_dir.empty()) return p;
    return ctx.output_dir / p;
}

std::filesystem::path report_path(const Context &ctx, const EvalReport &report, const std::string &explicit_path) {
    if (!explicit_path.empty()) return output_path(ctx, explicit_path);
    std::string name = report.task + "_" + report.dataset + "_" + report.model;
    if (report.gamma) {
        std::ostringstream g;
        g << *report.gamma;
        name += "_g" + g.str();
    }
    for (char &ch : name) {
        if (ch == '/' || ch == ' ') ch = '-';
    }
    return output_path(ctx, name + ".json");
}

void emit_report(const Context &ctx, const EvalReport &report, const std::string &explicit_path) {
    const auto path = report_path(ctx, report, explicit_path);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    save_report(report, path);
    std::cout << summary_line(report) << '\n' << "report: " << path.string() << '\n';
}

} // namespace sinr::cli
