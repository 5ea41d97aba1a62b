// Command-line front end: run scenario files and presets, evaluate the
// regret bound, list presets.

#include "decbandit/scenario_file.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

namespace {

using namespace decbandit;

void print_paths(const std::vector<std::filesystem::path>& paths)
{
    for (const auto& p : paths) std::cout << p.string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decentralized Bayesian multi-armed bandit simulator"};
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Run a scenario file and write its regret CSV and stats");
    run->add_option("config", config, "Scenario file")->required();

    auto* bound = app.add_subcommand("bound", "Write the regret upper bound curve for a Bernoulli scenario");
    bound->add_option("config", config, "Scenario file")->required();

    app.add_subcommand("presets", "List the preset experiments");

    std::string preset;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    std::string out_dir = ".";
    auto* run_preset = app.add_subcommand("run-preset", "Run every scenario of a preset");
    run_preset->add_option("name", preset, "Preset name")->required();
    auto* runs_opt = run_preset->add_option("--runs", runs, "Monte Carlo runs per scenario")->check(CLI::PositiveNumber);
    auto* seed_opt = run_preset->add_option("--seed", seed, "Master seed");
    auto* horizon_opt = run_preset->add_option("--horizon", horizon, "Rounds per run")->check(CLI::PositiveNumber);
    run_preset->add_option("--out", out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            print_paths(run_and_write(load_scenario(config)));
        } else if (bound->parsed()) {
            print_paths(write_bound(load_scenario(config)));
        } else if (run_preset->parsed()) {
            PresetOptions options;
            if (*runs_opt) options.runs = runs;
            if (*seed_opt) options.seed = seed;
            if (*horizon_opt) options.horizon = horizon;
            options.out_dir = out_dir;
            for (const ScenarioFile& file : expand_preset(preset, options)) print_paths(run_and_write(file));
        } else {
            for (const PresetInfo& p : presets()) std::cout << p.name << "\t" << p.description << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
