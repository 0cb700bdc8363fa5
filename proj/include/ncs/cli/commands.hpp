#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ncs::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitCertification = 2,
    kExitSearchExhausted = 3,
    kExitGasFailed = 4,
};

struct CommandOptions {
    std::string config;
    std::string schedule;
    std::string trajectories;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    bool log_scale = false;
    int plants = 2;
    int capacity = 1;
};

// Each command writes its artifacts under opts.out and returns an exit
// code; library errors propagate as exceptions.
int cmd_certify(const CommandOptions& opts, std::ostream& log);
int cmd_design(const CommandOptions& opts, std::ostream& log);
int cmd_simulate(const CommandOptions& opts, std::ostream& log);
int cmd_generate(const CommandOptions& opts, std::ostream& log);
int cmd_report(const CommandOptions& opts, std::ostream& log);

/// Dispatches by name and maps exceptions onto the exit-code contract.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log);

} // namespace ncs::cli
