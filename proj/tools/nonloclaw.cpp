#include <iostream>

#include <CLI11.hpp>

#include "nonloclaw/app.hpp"

int main(int argc, char** argv)
{
    using namespace nonloclaw;
    CLI::App app{"Nonlocal conservation law solver"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    AppOptions opts;
    std::string out;
    std::uint64_t seed = 0;
    const std::pair<const char*, const char*> commands[] = {
        {"run", "evolve the configured problem and write snapshots"},
        {"verify", "check the discrete properties and the entropy inequality"},
        {"study", "compare against a local oracle as the horizon shrinks"},
        {"resolvent", "solve one resolvent equation"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "seed for random initial data");
        sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--out"))
        opts.out = out;
    if (sub->count("--seed"))
        opts.seed = seed;
    return run_app(sub->get_name(), opts, std::cout, std::cerr);
}
