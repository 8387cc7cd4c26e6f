#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

#ifndef SPIKEWATT_DATA_DIR
#define SPIKEWATT_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
    using namespace spikewatt::cli;

    CLI::App app{"spikewatt: spiking-network simulation with energy and carbon accounting"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    std::uint64_t seed = default_seed;
    std::string output_dir = ".";
    app.add_option("--seed", seed, "Seed for every random draw (default 1)");
    app.add_option("--output-dir", output_dir, "Directory receiving artifacts")->capture_default_str();
    std::string format = "csv";
    app.add_option("--format", format, "Report format: csv or structured (JSON)")
        ->check(CLI::IsMember({"csv", "structured"}))
        ->capture_default_str();

    std::string config_path;
    auto* train = app.add_subcommand("train-stdp", "Train a single STDP neuron to detect a repeating spike pattern");
    train->add_option("config", config_path, "Experiment config (JSON)")->required();

    ConvOptions conv;
    std::string kernel_path, input_path;
    auto* simulate = app.add_subcommand("simulate-conv", "Run a rate-coded input through a spiking convolution layer");
    simulate->add_option("--kernel", kernel_path, "Kernel matrix file")->required();
    simulate->add_option("--input", input_path, "Intensity matrix file with values in [0,1]");
    simulate->add_option("--height", conv.height, "Uniform input height when --input is absent")->capture_default_str();
    simulate->add_option("--width", conv.width, "Uniform input width when --input is absent")->capture_default_str();
    simulate->add_option("--rate", conv.rate, "Uniform input intensity when --input is absent")->capture_default_str();
    simulate->add_option("--max-rate", conv.max_rate, "Spike probability per step at intensity 1")->capture_default_str();
    simulate->add_option("--steps", conv.steps, "Simulated steps")->capture_default_str();
    simulate->add_option("--gamma", conv.gamma, "Firing threshold")->capture_default_str();
    simulate->add_flag("--fire-once", conv.fire_once, "Latch sites after their first spike");

    std::string workload_path, profile_path;
    auto* compare = app.add_subcommand("compare-energy", "Compare dense-convolution and spiking energy");
    compare->add_option("workload", workload_path, "Workload spec (JSON)")->required();
    compare->add_option("--profile", profile_path, "Energy profile (JSON)")
        ->default_str(std::string(SPIKEWATT_DATA_DIR) + "/profile_45nm.json");

    NatureReportOptions nature;
    std::string runlog_path, grid_path = std::string(SPIKEWATT_DATA_DIR) + "/grid_profiles.json";
    std::string overrides_path, hardware_path;
    auto* report = app.add_subcommand("nature-report", "Compute NATURE scores and CO2e from a training run log");
    report->add_option("runlog", runlog_path, "Run-log CSV")->required();
    report->add_option("--region", nature.region, "Grid region id")->required();
    report->add_option("--grid-profiles", grid_path, "Grid carbon-intensity table (JSON)")->capture_default_str();
    report->add_option("--overrides", overrides_path, "Override values (JSON)");
    report->add_option("--hardware", hardware_path, "Declared hardware power draws (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_code::ok : exit_code::domain;
    }

    if (app.count("--seed")) global.seed = seed;
    global.output_dir = output_dir;
    global.format = format == "structured" ? OutputFormat::structured : OutputFormat::csv;

    CommandOutcome outcome;
    if (*train) {
        outcome = cmd_train_stdp(config_path, global);
    } else if (*simulate) {
        conv.kernel_path = kernel_path;
        if (!input_path.empty()) conv.input_path = input_path;
        outcome = cmd_simulate_conv(conv, global);
    } else if (*compare) {
        if (profile_path.empty()) profile_path = std::string(SPIKEWATT_DATA_DIR) + "/profile_45nm.json";
        outcome = cmd_compare_energy(workload_path, profile_path, global);
    } else if (*report) {
        nature.runlog_path = runlog_path;
        nature.grid_profiles_path = grid_path;
        if (!overrides_path.empty()) nature.overrides_path = overrides_path;
        if (!hardware_path.empty()) nature.hardware_path = hardware_path;
        outcome = cmd_nature_report(nature, global);
    }

    if (outcome.exit_code != exit_code::ok) {
        std::cerr << outcome.message << '\n';
        return outcome.exit_code;
    }
    for (const auto& path : outcome.artifacts) std::cout << path.string() << '\n';
    return exit_code::ok;
}
