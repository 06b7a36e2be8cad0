#include <iostream>
#include <memory>
#include <sstream>

#include "cli_common.hpp"
#include "sinr/embedding.hpp"
#include "sinr/error.hpp"
#include "sinr/eval_word.hpp"
#include "sinr/random.hpp"

namespace sinr::cli {

namespace {

std::string number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

struct GraphTaskOptions {
    GraphInput graph;
    GammaOption gamma;
    std::string embed = "nr";
    std::size_t runs = 50;
    MfConfig mf;
    std::string classifier = "gbdt";
    std::string report;
};

void add_graph_task_options(CLI::App &cmd, GraphTaskOptions &o, bool heuristics) {
    add_graph_options(cmd, o.graph);
    add_gamma_option(cmd, o.gamma);
    std::vector<std::string> embedders{"nr", "mf"};
    if (heuristics) embedders.push_back("heuristics");
    cmd.add_option("--embed", o.embed, "Embedding method")->capture_default_str()->check(CLI::IsMember(embedders));
    cmd.add_option("--runs", o.runs, "Independent runs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--epochs", o.mf.epochs, "Factorisation epochs (--embed mf)")->capture_default_str();
    cmd.add_option("--lr", o.mf.learning_rate, "Factorisation learning rate (--embed mf)")->capture_default_str();
    cmd.add_option("--report", o.report, "Report path (default <output-dir>/<task>_<dataset>_<model>_g<gamma>.json)");
}

void add_classifier_option(CLI::App &cmd, GraphTaskOptions &o) {
    cmd.add_option("--classifier", o.classifier, "Classifier")
        ->capture_default_str()
        ->check(CLI::IsMember({"gbdt", "logistic"}));
}

ClassifierConfig classifier_config(const GraphTaskOptions &o) {
    ClassifierConfig c;
    c.kind = o.classifier == "logistic" ? ClassifierKind::logistic : ClassifierKind::gradient_boosting;
    return c;
}

EmbedderSpec embedder_spec(const GraphTaskOptions &o, const WeightedGraph &g) {
    EmbedderSpec spec;
    spec.kind = o.embed == "mf" ? EmbedderKind::mf : EmbedderKind::nr;
    spec.louvain.gamma = o.gamma.resolve(g.node_count());
    spec.mf = o.mf;
    return spec;
}

void finish_graph_report(EvalReport &report, const GraphTaskOptions &o, const EmbedderSpec *spec) {
    report.dataset = o.graph.dataset_name();
    if (spec) {
        report.gamma = spec->louvain.gamma;
        if (spec->kind == EmbedderKind::mf) {
            report.set("epochs", std::to_string(spec->mf.epochs));
            report.set("learning_rate", number(spec->mf.learning_rate));
        }
    }
}

NodeLabels labels_for(const std::string &labels, const GraphInput &graph, const WeightedGraph &g,
                      const Context &ctx) {
    std::filesystem::path path = labels;
    if (path.empty()) path = graph.path(ctx).parent_path() / "labels.tsv";
    if (!std::filesystem::exists(path)) throw Error("node labels not found: " + path.string() + " (use --labels)");
    return load_node_labels(path, g.labels());
}

SimilarityFormat similarity_format(const std::string &name) {
    if (name == "men") return SimilarityFormat::men;
    if (name == "ws353") return SimilarityFormat::ws353;
    if (name == "scws") return SimilarityFormat::scws;
    return SimilarityFormat::tsv;
}

std::string model_label(const std::filesystem::path &model) { return model.stem().string(); }

} // namespace

void add_eval_commands(CLI::App &app, Context &ctx) {
    auto *eval = app.add_subcommand("eval", "Evaluation protocols");
    eval->require_subcommand(1);

    {
        struct Options : GraphTaskOptions {
            double test_fraction = 0.2;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = eval->add_subcommand("linkpred", "Link prediction accuracy on balanced held-out pairs");
        add_graph_task_options(*cmd, *o, true);
        add_classifier_option(*cmd, *o);
        cmd->add_option("--test-fraction", o->test_fraction, "Share of edges held out")->capture_default_str();
        cmd->callback([o, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            LinkPredConfig lp;
            lp.test_fraction = o->test_fraction;
            lp.runs = o->runs;
            lp.seed = ctx.seed;
            lp.jobs = ctx.jobs;
            lp.classifier = classifier_config(*o);
            EvalReport report;
            if (o->embed == "heuristics") {
                report = run_link_prediction(g, heuristic_featurizer(), lp, "Heuristics");
                finish_graph_report(report, *o, nullptr);
            } else {
                const auto spec = embedder_spec(*o, g);
                report = run_link_prediction(g, embedding_featurizer(make_embedder(spec)), lp, model_name(spec));
                finish_graph_report(report, *o, &spec);
            }
            emit_report(ctx, report, o->report);
        });
    }

    for (const auto target : {RegressionTarget::degree, RegressionTarget::clustering_coefficient,
                              RegressionTarget::pagerank}) {
        auto o = std::make_shared<GraphTaskOptions>();
        auto *cmd = eval->add_subcommand(target_name(target), "Least-squares regression of a node property (R^2)");
        add_graph_task_options(*cmd, *o, false);
        cmd->callback([o, target, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            NodeTaskConfig nc;
            nc.runs = o->runs;
            nc.seed = ctx.seed;
            nc.jobs = ctx.jobs;
            const auto spec = embedder_spec(*o, g);
            auto report = run_regression(g, make_embedder(spec), target, nc, model_name(spec));
            finish_graph_report(report, *o, &spec);
            emit_report(ctx, report, o->report);
        });
    }

    for (const bool spectral : {true, false}) {
        struct Options : GraphTaskOptions {
            std::string labels;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = spectral ? eval->add_subcommand("spectral", "Spectral clustering NMI against node labels")
                             : eval->add_subcommand("classify", "Node classification accuracy");
        add_graph_task_options(*cmd, *o, false);
        if (!spectral) add_classifier_option(*cmd, *o);
        cmd->add_option("--labels", o->labels, "node<TAB>label file (default: labels.tsv next to the graph)");
        cmd->callback([o, spectral, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            const auto labels = labels_for(o->labels, o->graph, g, ctx);
            NodeTaskConfig nc;
            nc.runs = o->runs;
            nc.seed = ctx.seed;
            nc.jobs = ctx.jobs;
            nc.classifier = classifier_config(*o);
            const auto spec = embedder_spec(*o, g);
            auto report = spectral ? run_spectral_clustering(g, make_embedder(spec), labels, nc, model_name(spec))
                                   : run_classification(g, make_embedder(spec), labels, nc, model_name(spec));
            finish_graph_report(report, *o, &spec);
            emit_report(ctx, report, o->report);
        });
    }

    {
        struct Options {
            std::string model;
            std::string dataset;
            std::string format = "tsv";
            std::string report;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = eval->add_subcommand("similarity", "Spearman correlation with human similarity scores");
        cmd->add_option("--model", o->model, "Word embedding")->required()->check(CLI::ExistingFile);
        cmd->add_option("--dataset", o->dataset, "Similarity dataset")->required()->check(CLI::ExistingFile);
        cmd->add_option("--format", o->format, "Dataset layout")
            ->capture_default_str()
            ->check(CLI::IsMember({"tsv", "men", "ws353", "scws"}));
        cmd->add_option("--report", o->report, "Report path");
        cmd->callback([o, &ctx] {
            const auto e = load_embedding(o->model);
            const auto ds = load_similarity_dataset(o->dataset, similarity_format(o->format));
            const auto r = word_similarity(e, ds);
            EvalReport report;
            report.task = "similarity";
            report.dataset = ds.name;
            report.model = model_label(o->model);
            report.metric = "spearman";
            report.values = {r.spearman};
            report.set("format", o->format);
            report.set("pairs", std::to_string(ds.pairs.size()));
            report.set("retained", std::to_string(r.retained));
            report.set("coverage", number(r.coverage));
            emit_report(ctx, report, o->report);
        });
    }

    {
        struct Options {
            std::string model;
            std::string dataset;
            std::size_t runs = 10;
            std::string report;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = eval->add_subcommand("categorize", "Concept categorisation purity");
        cmd->add_option("--model", o->model, "Word embedding")->required()->check(CLI::ExistingFile);
        cmd->add_option("--dataset", o->dataset, "word<TAB>category file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--runs", o->runs, "k-means restarts with distinct seeds")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--report", o->report, "Report path");
        cmd->callback([o, &ctx] {
            const auto e = load_embedding(o->model);
            const auto ds = load_categorization_dataset(o->dataset);
            const auto r = concept_categorization(e, ds, o->runs, ctx.seed);
            EvalReport report;
            report.task = "categorize";
            report.dataset = ds.name;
            report.model = model_label(o->model);
            report.metric = "purity";
            report.values = {r.purity};
            report.set("runs", std::to_string(o->runs));
            report.set("seed", std::to_string(ctx.seed));
            report.set("kmeans_purity", number(r.kmeans_purity));
            report.set("agglomerative_purity", number(r.agglomerative_purity));
            report.set("coverage", number(r.coverage));
            emit_report(ctx, report, o->report);
        });
    }

    {
        struct Options {
            GraphInput graph;
            GammaOption gamma;
            std::size_t runs = 10;
            std::string report;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = eval->add_subcommand("stability", "Pairwise NMI between Louvain runs");
        add_graph_options(*cmd, o->graph);
        add_gamma_option(*cmd, o->gamma);
        cmd->add_option("--runs", o->runs, "Louvain runs (at least 2)")->capture_default_str();
        cmd->add_option("--report", o->report, "Report path");
        cmd->callback([o, &ctx] {
            const WeightedGraph g = o->graph.load(ctx);
            LouvainConfig lc;
            lc.gamma = o->gamma.resolve(g.node_count());
            EvalReport report;
            report.task = "stability";
            report.dataset = o->graph.dataset_name();
            report.model = "Louvain";
            report.metric = "nmi";
            report.gamma = lc.gamma;
            report.values = community_stability(g, lc, o->runs, ctx.seed, ctx.jobs);
            report.set("runs", std::to_string(o->runs));
            report.set("seed", std::to_string(ctx.seed));
            report.note("values are the NMI of every pair of runs");
            emit_report(ctx, report, o->report);
        });
    }

    {
        struct Options {
            std::vector<std::string> models;
            std::string ns = "10,25,50,100";
            std::size_t sample = 0;
            std::string dataset = "models";
            std::string report;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = eval->add_subcommand("varnn", "Nearest-neighbour variation between models");
        cmd->add_option("--models", o->models, "Two or more word embeddings")
            ->required()
            ->expected(2, -1)
            ->check(CLI::ExistingFile);
        cmd->add_option("--n", o->ns, "Comma-separated neighbourhood sizes")->capture_default_str();
        cmd->add_option("--sample", o->sample, "Sample this many shared words (0 = all)")->capture_default_str();
        cmd->add_option("--name", o->dataset, "Dataset name used in the report")->capture_default_str();
        cmd->add_option("--report", o->report, "Report path");
        cmd->callback([o, &ctx] {
            std::vector<SparseEmbedding> models;
            for (const auto &path : o->models) models.push_back(load_embedding(path));
            std::vector<const SparseEmbedding *> ptrs;
            for (const auto &m : models) ptrs.push_back(&m);
            std::vector<std::size_t> ns;
            for (const auto &item : split_list(o->ns)) ns.push_back(std::stoul(item));
            auto words = shared_vocabulary(ptrs);
            if (o->sample > 0) words = sample_words(std::move(words), o->sample, ctx.seed);
            EvalReport report;
            report.task = "varnn";
            report.dataset = o->dataset;
            report.model = model_label(o->models.front());
            report.metric = "varnn";
            report.values = mean_varnn(ptrs, ns, words, ctx.jobs);
            report.set("n", o->ns);
            report.set("models", std::to_string(models.size()));
            report.set("words", std::to_string(words.size()));
            report.set("seed", std::to_string(ctx.seed));
            report.note("values are indexed by n, one mean per neighbourhood size");
            emit_report(ctx, report, o->report);
        });
    }
}

} // namespace sinr::cli
