// Command-line front end: ladder {price|sweep|mc-check} --config run.json

#include <iostream>

#include "CLI11.hpp"

#include "ladder/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Ladder-strategy option pricer"};
    app.require_subcommand(1);

    ladder::CliOptions opts;
    ladder::Command command = ladder::Command::price;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON run configuration")->required();
        sub->add_option("--out", opts.out_path, "write CSV output to this file");
        sub->add_option("--seed", opts.seed, "override mc.seed");
        sub->add_option("--paths", opts.paths, "override mc.n_paths");
        sub->add_option("--steps", opts.steps, "override mc.n_steps");
        sub->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    };

    auto* price = app.add_subcommand("price", "closed-form price and band table");
    add_common(price);
    price->callback([&] { command = ladder::Command::price; });

    auto* sweep = app.add_subcommand("sweep", "price along one parameter axis, CSV output");
    add_common(sweep);
    sweep->callback([&] { command = ladder::Command::sweep; });

    auto* check = app.add_subcommand("mc-check", "closed form against both Monte Carlo oracles");
    add_common(check);
    // Test hook: shifts the law's log mean so the check is seen to fail.
    check->add_option("--perturb-log-mean", opts.log_mean_shift)->group("");
    check->callback([&] { command = ladder::Command::mc_check; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ladder::kExitConfig;
    }
    return ladder::run_command(command, opts, std::cout, std::cerr);
}
