#include <cstdlib>
#include <iostream>

#include "cli_common.hpp"
#include "sinr/error.hpp"

int main(int argc, char **argv) {
    CLI::App app{"sinr: community-based sparse interpretable embeddings"};
    app.set_config("--config", "", "key = value configuration file");
    app.require_subcommand(1);
    app.fallthrough();

    sinr::cli::Context ctx;
    if (const char *dir = std::getenv("SINR_OUTPUT_DIR")) ctx.output_dir = dir;
    app.add_option("--seed", ctx.seed, "Base random seed")->capture_default_str();
    app.add_option("--jobs,-j", ctx.jobs, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--output-dir,-o", ctx.output_dir, "Directory for outputs (default $SINR_OUTPUT_DIR or .)");
    app.add_option("--data-dir", ctx.data_dir, "Directory searched for datasets given by name")->capture_default_str();

    sinr::cli::add_build_commands(app, ctx);
    sinr::cli::add_eval_commands(app, ctx);
    sinr::cli::add_probe_commands(app, ctx);
    sinr::cli::add_fetch_command(app, ctx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const sinr::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
