#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "sinr/embedding.hpp"
#include "sinr/error.hpp"
#include "sinr/interpret.hpp"

namespace sinr::cli {

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    return in;
}

void print_descriptor(const DimensionDescriptor &d) {
    std::cout << "dim" << d.dim << " (" << d.member_count << " nonzero)";
    if (d.short_list) std::cout << " [short list]";
    std::cout << '\n';
    for (const auto &[word, value] : d.words) std::cout << "  " << word << '\t' << value << '\n';
}

} // namespace

void add_probe_commands(CLI::App &app, Context &ctx) {
    auto *probe = app.add_subcommand("probe", "Inspect dimensions of an embedding");
    probe->require_subcommand(1);

    {
        struct Options {
            std::string model;
            DimensionId dim = 0;
            std::size_t k = 10;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = probe->add_subcommand("top-words", "Strongest words of a dimension");
        cmd->add_option("--model", o->model, "Embedding")->required()->check(CLI::ExistingFile);
        cmd->add_option("--dim", o->dim, "Dimension id")->required();
        cmd->add_option("--k", o->k, "Number of words")->capture_default_str();
        cmd->callback([o] { print_descriptor(top_words(load_embedding(o->model), o->dim, o->k)); });
    }
    {
        struct Options {
            std::string model;
            std::string word;
            std::size_t k = 3;
            std::size_t per_dim = 5;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = probe->add_subcommand("word-dims", "Strongest dimensions of a word");
        cmd->add_option("--model", o->model, "Embedding")->required()->check(CLI::ExistingFile);
        cmd->add_option("--word", o->word, "Word or node label")->required();
        cmd->add_option("--k", o->k, "Number of dimensions")->capture_default_str();
        cmd->add_option("--words-per-dim", o->per_dim, "Words listed per dimension")->capture_default_str();
        cmd->callback([o] {
            const auto r = strongest_dimensions(load_embedding(o->model), o->word, o->k, o->per_dim);
            if (r.short_list) std::cout << "# fewer than " << o->k << " nonzero dimensions\n";
            for (const auto &d : r.dims) {
                std::cout << "value " << d.value << ": ";
                print_descriptor(d.descriptor);
            }
        });
    }
    {
        struct Options {
            std::string model;
            std::string words;
            std::string grid;
            bool values = false;
            std::size_t per_dim = 3;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = probe->add_subcommand("shared-dims", "Dimensions shared by at least two words");
        cmd->add_option("--model", o->model, "Embedding")->required()->check(CLI::ExistingFile);
        cmd->add_option("--words", o->words, "Comma-separated words")->required();
        cmd->add_option("--grid", o->grid, "Write the tab-separated grid here instead of stdout");
        cmd->add_flag("--values", o->values, "Grid cells hold values instead of presence");
        cmd->add_option("--words-per-dim", o->per_dim, "Words naming each dimension")->capture_default_str();
        cmd->callback([o, &ctx] {
            const auto shared = shared_dimensions(load_embedding(o->model), split_list(o->words), o->per_dim);
            if (o->grid.empty()) {
                write_shared_grid(std::cout, shared, !o->values);
                return;
            }
            const auto path = output_path(ctx, o->grid);
            auto out = open_out(path);
            write_shared_grid(out, shared, !o->values);
            std::cout << shared.dims.size() << " shared dimensions -> " << path.string() << '\n';
        });
    }

    {
        struct Options {
            std::string model;
            std::size_t count = 200;
            std::string tasks = "intrusion_tasks.tsv";
            std::string key = "intrusion_key.tsv";
        };
        auto o = std::make_shared<Options>();
        auto *cmd = app.add_subcommand("intrusion-gen", "Generate word intrusion tasks");
        cmd->add_option("--model", o->model, "Embedding")->required()->check(CLI::ExistingFile);
        cmd->add_option("--count", o->count, "Number of tasks (distinct dimensions)")->capture_default_str();
        cmd->add_option("--tasks", o->tasks, "Annotator file")->capture_default_str();
        cmd->add_option("--key", o->key, "Answer key file")->capture_default_str();
        cmd->callback([o, &ctx] {
            const auto e = load_embedding(o->model);
            const auto tasks =
                sample_intrusion_tasks(e, o->count, ctx.seed, std::filesystem::path(o->model).stem().string());
            const auto tasks_path = output_path(ctx, o->tasks);
            const auto key_path = output_path(ctx, o->key);
            auto tasks_out = open_out(tasks_path);
            write_intrusion_tasks(tasks_out, tasks);
            auto key_out = open_out(key_path);
            write_intrusion_key(key_out, tasks);
            std::cout << tasks.size() << " tasks -> " << tasks_path.string() << ", key -> " << key_path.string()
                      << '\n';
        });
    }
    {
        struct Options {
            std::string key;
            std::string annotations;
        };
        auto o = std::make_shared<Options>();
        auto *cmd = app.add_subcommand("intrusion-score", "Score collected intrusion annotations");
        cmd->add_option("--key", o->key, "Answer key from intrusion-gen")->required()->check(CLI::ExistingFile);
        cmd->add_option("--annotations", o->annotations, "task_id<TAB>annotator<TAB>decision<TAB>words")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->callback([o] {
            auto key_in = open_in(o->key);
            auto ann_in = open_in(o->annotations);
            const auto score =
                score_annotations(read_intrusion_key(key_in, o->key), read_annotations(ann_in, o->annotations));
            std::cout << "annotations\t" << score.annotations << "\ntasks\t" << score.tasks << '\n';
            for (std::size_t i = 0; i < kOutcomeCount; ++i) {
                const double share = score.annotations ? static_cast<double>(score.counts[i]) /
                                                             static_cast<double>(score.annotations)
                                                       : 0.0;
                std::cout << outcome_name(static_cast<Outcome>(i)) << '\t' << score.counts[i] << '\t'
                          << std::fixed << std::setprecision(3) << share << '\n'
                          << std::defaultfloat;
            }
            std::cout << std::setprecision(3) << "agreement_two\t" << score.agree_two << "\nagreement_all\t"
                      << score.agree_all << "\nfleiss_kappa\t" << score.fleiss_kappa << '\n';
        });
    }
}

} // namespace sinr::cli
