#pragma once

#include <filesystem>
#include <vector>

#include "plcfh/config.hpp"

namespace plcfh::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_io = 2,
    exit_internal = 3,
};

/// Deployment and grid of replication 0 as `layout.json`.
std::filesystem::path cmd_generate(const SimulationConfig& cfg, const std::filesystem::path& out_dir);

/// One row per replication in `metrics.csv`.
std::filesystem::path cmd_simulate(const SimulationConfig& cfg, const std::filesystem::path& out_dir);

struct SweepOutputs {
    std::filesystem::path table;
    std::vector<std::filesystem::path> plots;
};

/// `sweep.csv`, and with `plots` also reachability.svg, traffic_avg.svg
/// and traffic_max.svg.
SweepOutputs cmd_sweep(const SimulationConfig& cfg, const std::vector<double>& densities,
                       const std::vector<Topology>& topologies, const std::filesystem::path& out_dir, bool plots,
                       unsigned threads = 0);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv);

} // namespace plcfh::cli
