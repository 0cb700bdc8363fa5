// Periodic network scheduling for bandwidth-limited control loops.
//
//   ncs_sched certify  --config cfg.json --out dir
//   ncs_sched design   --config cfg.json --out dir
//   ncs_sched simulate --config cfg.json [--schedule dir/schedule.json] --out dir [--seed N] [--log-scale]
//   ncs_sched generate --plants N --capacity M --seed S --out dir
//   ncs_sched report   [--schedule s.json] [--trajectories t.csv] --out dir

#include <iostream>

#include <CLI11.hpp>

#include "ncs/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Periodic scheduling for networked control systems"};
    app.require_subcommand(1);

    ncs::cli::CommandOptions opts;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    };

    auto* certify = app.add_subcommand("certify", "Compute mode certificates on the rate grid");
    certify->add_option("--config", opts.config, "Config JSON")->required();
    add_common(certify);

    auto* design = app.add_subcommand("design", "Search for a T-contractive cycle");
    design->add_option("--config", opts.config, "Config JSON")->required();
    add_common(design);

    auto* simulate = app.add_subcommand("simulate", "Simulate plants under a schedule");
    simulate->add_option("--config", opts.config, "Config JSON")->required();
    simulate->add_option("--schedule", opts.schedule, "Schedule JSON (default <out>/schedule.json)");
    simulate->add_flag("--log-scale", opts.log_scale, "Logarithmic y axis in plots");
    add_common(simulate);

    auto* generate = app.add_subcommand("generate", "Generate a random NCS config");
    generate->add_option("--plants", opts.plants, "Number of plants N")->required();
    generate->add_option("--capacity", opts.capacity, "Network capacity M")->required();
    add_common(generate);

    auto* report = app.add_subcommand("report", "Summarize simulation artifacts");
    report->add_option("--schedule", opts.schedule, "Schedule JSON (default <out>/schedule.json)");
    report->add_option("--trajectories", opts.trajectories,
                       "Trajectory CSV (default <out>/trajectories.csv)");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ncs::cli::kExitConfig;
    }

    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--seed") > 0) {
            opts.seed = seed;
        }
        return ncs::cli::run_command(sub->get_name(), opts, std::cerr);
    }
    return ncs::cli::kExitConfig;
}
