#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ntnsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"O-RAN NTN constellation feasibility simulator"};
    app.require_subcommand(1);

    ntnsim::cli::DimensionArgs dim;
    auto* dimension = app.add_subcommand("dimension", "Print bit rates and latency budgets");
    dimension->add_option("--bandwidth-mhz", dim.bandwidth_mhz, "Channel bandwidth in MHz");
    dimension->add_option("--scs-khz", dim.scs_khz, "Subcarrier spacing in kHz");
    dimension->add_option("--prb", dim.n_prb, "Number of PRBs");
    dimension->add_option("--layers", dim.n_layers, "MIMO layers");
    dimension->add_option("--modulation", dim.modulation, "qpsk/16qam/64qam/256qam");
    dimension->add_option("--direction", dim.direction, "dl or ul");

    ntnsim::cli::SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and emit reports");
    simulate->add_option("--scenario", sim.scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--out", sim.out_dir, "Output directory");
    simulate->add_option("--format", sim.format, "Feasibility series format: csv or json");
    std::uint64_t seed = 0;
    auto* seed_opt = simulate->add_option("--seed", seed, "Override the scenario seed");

    ntnsim::cli::CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "Compare split/extension options side by side");
    compare->add_option("scenarios", cmp.scenario_paths, "Scenario JSON files")->required();
    compare->add_option("--options", cmp.options,
                        "Option tokens applied to a single base scenario (e.g. 2a 2a+ext2)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("--scenario", validate_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? ntnsim::cli::kExitError : ntnsim::cli::kExitOk;
    }

    if (dimension->parsed()) return ntnsim::cli::cmd_dimension(dim, std::cout, std::cerr);
    if (simulate->parsed()) {
        if (seed_opt->count() > 0) sim.seed = seed;
        return ntnsim::cli::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (compare->parsed()) return ntnsim::cli::cmd_compare(cmp, std::cout, std::cerr);
    if (validate->parsed()) return ntnsim::cli::cmd_validate(validate_path, std::cout, std::cerr);
    return ntnsim::cli::kExitError;
}
