#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dgf/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gradient flow for regularized Dirac-geodesics on the circle"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;

    for (const std::string name : {"validate", "flow", "sweep", "spectrum", "report"}) {
        CLI::App* sub = app.add_subcommand(name, name + " scenario");
        sub->add_option("--config", config_path, "path to the JSON run configuration")
            ->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "seed override for random initial data");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string scenario = app.get_subcommands().front()->get_name();

    dgf::RunConfig config;
    try {
        config = dgf::parse_run_config_file(config_path);
    } catch (const dgf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dgf::kExitConfig;
    }
    if (config.scenario != scenario) {
        // the subcommand wins; the config must agree or be generic
        if (config.scenario.empty() || config.scenario == "flow" || config.scenario == scenario) {
            config.scenario = scenario;
        } else {
            std::cerr << "config error: config scenario '" << config.scenario
                      << "' does not match subcommand '" << scenario << "'\n";
            return dgf::kExitConfig;
        }
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed) config.initial.seed = *seed;

    return dgf::run_scenario(config);
}
