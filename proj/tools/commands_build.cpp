#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "sinr/cooc.hpp"
#include "sinr/embed.hpp"
#include "sinr/error.hpp"
#include "sinr/graph_algorithms.hpp"
#include "sinr/graph_io.hpp"
#include "sinr/random.hpp"

namespace sinr::cli {

namespace {

void save_graph(const WeightedGraph &g, const std::filesystem::path &path, bool text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    if (text) {
        save_edge_list(g, path);
    } else {
        save_graph_binary(g, path);
    }
    std::cout << "graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges -> " << path.string()
              << '\n';
}

struct EmbedOptions {
    GraphInput graph;
    GammaOption gamma;
    std::string partition;
    std::string out;
    bool binary = false;
    MfConfig mf;
    std::string loss_trace;
};

void add_embed_common(CLI::App &cmd, EmbedOptions &o) {
    add_graph_options(cmd, o.graph);
    add_gamma_option(cmd, o.gamma);
    cmd.add_option("--partition", o.partition, "Partition file (node<TAB>community); Louvain is run otherwise");
    cmd.add_option("--out", o.out, "Output embedding")->required();
    cmd.add_flag("--binary", o.binary, "Write the binary embedding format");
}

Partition partition_for(const EmbedOptions &o, const WeightedGraph &g, const Context &ctx) {
    if (!o.partition.empty()) return load_partition(o.partition, g.labels());
    LouvainConfig lc;
    lc.gamma = o.gamma.resolve(g.node_count());
    lc.seed = derive_seed(ctx.seed, 1);
    return louvain(g, lc);
}

void write_embedding(const SparseEmbedding &e, const std::filesystem::path &path, bool binary) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    save_embedding(e, path, binary ? EmbeddingFormat::binary : EmbeddingFormat::text);
    std::cout << "embedding: " << e.rows() << " x " << e.cols() << ", " << e.nnz() << " nonzeros -> "
              << path.string() << '\n';
}

} // namespace

void add_build_commands(CLI::App &app, Context &ctx) {
    {
        struct Options {
            GraphInput graph;
            std::string out;
            bool lcc = false;
            bool text = false;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = app.add_subcommand("build-graph", "Convert an edge list to the binary graph format");
        add_graph_options(*cmd, o->graph);
        cmd->add_option("--out", o->out, "Output graph")->required();
        cmd->add_flag("--lcc", o->lcc, "Keep only the largest connected component");
        cmd->add_flag("--text", o->text, "Write an edge list instead of the binary format");
        cmd->callback([o, &ctx] {
            WeightedGraph g = o->graph.load(ctx);
            if (o->lcc) g = largest_connected_component(g).graph;
            save_graph(g, output_path(ctx, o->out), o->text);
        });
    }
    {
        struct Options {
            std::string corpus;
            CorpusConfig config;
            bool keep_case = false;
            std::string exceptions;
            std::string out;
            std::string vocab;
            bool text = false;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = app.add_subcommand("build-cooc", "Build a PMI-filtered co-occurrence graph from a corpus");
        cmd->add_option("--corpus", o->corpus, "One sentence per line, blank-separated tokens")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--window", o->config.window_size, "Forward window size")->capture_default_str();
        cmd->add_option("--min-count", o->config.min_count, "Minimum word frequency")->capture_default_str();
        cmd->add_option("--min-length", o->config.min_word_length, "Minimum word length in code points")
            ->capture_default_str();
        cmd->add_flag("--keep-case", o->keep_case, "Disable ASCII lowercasing");
        cmd->add_option("--exceptions", o->exceptions, "Words exempt from the length filter")
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", o->out, "Output graph")->required();
        cmd->add_option("--vocab", o->vocab, "Write word<TAB>count for graph nodes");
        cmd->add_flag("--text", o->text, "Write an edge list instead of the binary format");
        cmd->callback([o, &ctx] {
            CorpusConfig cfg = o->config;
            cfg.lowercase = !o->keep_case;
            validate(cfg);
            const auto corpus = load_corpus(o->corpus, cfg.lowercase);
            std::unordered_set<std::string> exceptions;
            if (!o->exceptions.empty()) exceptions = load_exceptions(o->exceptions, cfg.lowercase);
            const auto vocab = build_vocab(corpus, cfg, exceptions);
            const auto acc = accumulate_cooc(corpus, vocab, cfg, ctx.jobs);
            const auto cg = pmi_filter(acc, vocab);
            std::cout << "corpus: " << corpus.tokens.size() << " tokens, " << corpus.types.size()
                      << " types; vocabulary " << vocab.size() << "; pairs " << cg.pairs << ", kept " << cg.kept
                      << '\n';
            save_graph(cg.graph, output_path(ctx, o->out), o->text);
            if (!o->vocab.empty()) {
                const auto path = output_path(ctx, o->vocab);
                std::ofstream out(path);
                if (!out) throw Error("cannot write " + path.string());
                write_vocabulary(cg, out);
            }
        });
    }
    {
        struct Options {
            GraphInput graph;
            GammaOption gamma;
            std::string out;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = app.add_subcommand("louvain", "Detect communities with the Louvain method");
        add_graph_options(*cmd, o->graph);
        add_gamma_option(*cmd, o->gamma);
        cmd->add_option("--out", o->out, "Output partition (node<TAB>community)")->required();
        cmd->callback([o, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            LouvainConfig lc;
            lc.gamma = o->gamma.resolve(g.node_count());
            lc.seed = derive_seed(ctx.seed, 1);
            const auto result = run_louvain(g, lc);
            const auto path = output_path(ctx, o->out);
            if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
            save_partition(result.partition, g.labels(), path);
            std::cout << "communities: " << result.partition.community_count() << ", modularity "
                      << std::setprecision(6) << modularity(g, result.partition, lc.gamma) << " (gamma "
                      << lc.gamma << ") -> " << path.string() << '\n';
        });
    }
    {
        auto o = std::make_shared<EmbedOptions>();
        auto *cmd = app.add_subcommand("embed-nr", "Node recall embedding");
        add_embed_common(*cmd, *o);
        cmd->callback([o, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            write_embedding(sinr_nr(g, partition_for(*o, g, ctx)), output_path(ctx, o->out), o->binary);
        });
    }
    {
        auto o = std::make_shared<EmbedOptions>();
        auto *cmd = app.add_subcommand("embed-mf", "Matrix factorisation embedding");
        add_embed_common(*cmd, *o);
        cmd->add_option("--epochs", o->mf.epochs, "Training epochs")->capture_default_str();
        cmd->add_option("--lr", o->mf.learning_rate, "Learning rate")->capture_default_str();
        cmd->add_option("--max-nodes", o->mf.max_nodes, "Refuse larger graphs")->capture_default_str();
        cmd->add_option("--loss-trace", o->loss_trace, "Write epoch<TAB>loss");
        cmd->callback([o, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            MfConfig mc = o->mf;
            mc.seed = derive_seed(ctx.seed, 2);
            const auto result = sinr_mf(g, partition_for(*o, g, ctx), mc);
            write_embedding(result.embedding, output_path(ctx, o->out), o->binary);
            if (!o->loss_trace.empty()) {
                const auto path = output_path(ctx, o->loss_trace);
                std::ofstream out(path);
                if (!out) throw Error("cannot write " + path.string());
                out << std::setprecision(17);
                for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
                    out << i + 1 << '\t' << result.loss_trace[i] << '\n';
                }
            }
            if (!result.loss_trace.empty()) std::cout << "final loss: " << result.loss_trace.back() << '\n';
        });
    }
}

} // namespace sinr::cli
