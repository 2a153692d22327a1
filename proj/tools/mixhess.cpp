#include "mixhess/commands.hpp"
#include "mixhess/errors.hpp"

#include <CLI11.hpp>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Neumann problem for mixed complex Hessian equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    const std::pair<const char*, const char*> commands[] = {
        {"identities", "run the symmetric-function and operator property suites"},
        {"solve", "damped Newton solve of the eps-regularized Neumann problem"},
        {"continue", "eps-continuation and extrapolation of the Neumann constant"},
        {"oracle", "radial ODE oracle on a ball"},
        {"compare", "full solves against the lifted radial oracle over several grids"},
        {"verify", "a priori estimate checks on a stored field dump"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "config file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "seed overriding [run] seed");
        sub->add_option("--threads", threads, "thread count overriding [run] threads (0 = automatic)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mixhess::exit_config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    mixhess::Config config;
    try {
        config = mixhess::Config::load(config_path);
    } catch (const mixhess::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return mixhess::exit_config_error;
    }
    mixhess::CommandOptions opts;
    opts.out = out_dir;
    opts.seed = seed;
    opts.threads = threads;
    try {
        return mixhess::run_command(command, config, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mixhess::exit_solver_failure;
    }
}
