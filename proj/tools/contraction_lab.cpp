#include <CLI11.hpp>

#include "contraction_lab/commands.hpp"

namespace cl = contraction_lab::cli;

int main(int argc, char** argv) {
    CLI::App app{"Contraction classes, fixed points and theorem checks on finite and sampled metric spaces"};
    app.require_subcommand(1, 1);
    cl::RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--instance", cfg.instance, "JSON map document");
        sub->add_option("--catalog", cfg.catalog_id, "catalog entry id");
        sub->add_option("--x0", cfg.x0, "starting point (label or value)");
        sub->add_option("--steps", cfg.steps, "Picard step budget");
        sub->add_option("--tol", cfg.tol, "fixed-point residual tolerance");
        sub->add_option("--eps-grid", cfg.eps_grid, "comma-separated eps values");
        sub->add_option("--grid-step", cfg.grid_step, "sampling step for interval parts");
        sub->add_option("--max-n", cfg.max_n, "bound on discrete parts of catalog spaces");
        sub->add_option("--seed", cfg.seed, "search seed");
        sub->add_option("--trials", cfg.trials, "search trials");
        sub->add_option("--size-range", cfg.size_range, "search space sizes A..B");
        sub->add_option("--maps", cfg.maps, "search map distribution (uniform|contractive|two_cycle|mixed)");
        sub->add_option("--mode", cfg.mode, "exact|float");
        sub->add_option("--format", cfg.format, "json|csv");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--theorem", cfg.theorem, "burton|petrov|mesmouli_uncorrected|corrected_main");
    };
    for (const char* name : {"reproduce", "classify", "iterate", "verify", "search"}) {
        auto* sub = app.add_subcommand(name);
        add_common(sub);
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cl::ExitCode::failure;
    }
    return cl::run(cfg);
}
