#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plcfh/config.hpp"
#include "plcfh/deployment.hpp"
#include "plcfh/gridgen.hpp"
#include "plcfh/traffic.hpp"

namespace plcfh {

/// Aggregate rate per time step at the hub and at each branch head.
struct RateSeries {
    double dt_s = 1.0;
    double horizon_s = 0.0;
    std::vector<double> hub;
    std::vector<std::vector<double>> branches;

    std::size_t steps() const { return hub.size(); }
    /// The last step is shorter when dt does not divide the horizon.
    double step_length(std::size_t k) const;

    bool operator==(const RateSeries&) const = default;
};

struct MetricsReport {
    std::uint64_t seed = 0;
    SimulationConfig config;

    std::size_t n_cells = 0;
    std::size_t n_served = 0;
    std::optional<double> reachability; ///< empty for an empty deployment
    double avg_rate_bps = 0.0;
    double max_rate_bps = 0.0;
    std::optional<double> mean_wait_s;      ///< pooled over served cells
    std::optional<double> mean_wait_cell_s; ///< mean of per-cell means
    std::vector<double> per_branch_avg_bps;
    int forced_crossings = 0;
    std::optional<double> offered_avg_rate_bps; ///< all cells, when requested

    bool operator==(const MetricsReport&) const = default;
};

/// Time-stepped aggregation. Each session of a served cell adds its rate
/// times the fraction of each step it overlaps; sessions of unserved cells
/// are ignored.
RateSeries aggregate_rate_series(std::span<const Session> sessions, const PowerGrid& grid, double dt_s,
                                 double horizon_s);

/// Same aggregation with every cell treated as served.
RateSeries aggregate_offered_series(std::span<const Session> sessions, const PowerGrid& grid, double dt_s,
                                    double horizon_s);

double time_average(std::span<const double> values, const RateSeries& series);

MetricsReport compute_metrics(const RateSeries& series, const PowerGrid& grid, std::span<const Session> sessions);

/// Everything one replication produced, for inspection and file output.
struct Replication {
    CellDeployment deployment;
    PowerGrid grid;
    std::vector<Session> sessions; ///< grouped by cell id, each group sorted by start
    RateSeries series;
    MetricsReport report;
};

/// Deployment and grid only; the first stage of a replication.
std::pair<CellDeployment, PowerGrid> build_scenario(const SimulationConfig& cfg, std::uint64_t seed);

Replication simulate_replication(const SimulationConfig& cfg, const TrafficModel& model, std::uint64_t seed);

MetricsReport run_replication(const SimulationConfig& cfg, std::uint64_t seed);
MetricsReport run_replication(const SimulationConfig& cfg, const TrafficModel& model, std::uint64_t seed);

/// Seed of replication `rep` of sweep cell (density_index, topology_index).
/// Depends only on its arguments, so any cell can be re-run alone.
std::uint64_t replication_seed(std::uint64_t master, std::size_t density_index, std::size_t topology_index,
                               std::size_t rep);

struct SampleStat {
    std::size_t count = 0;
    double mean = 0.0;
    std::optional<double> stderr_; ///< present when count >= 2

    bool operator==(const SampleStat&) const = default;
};

SampleStat summarize(std::span<const double> values);

struct SweepRow {
    std::size_t density_index = 0;
    std::size_t topology_index = 0;
    double density = 0.0;
    Topology topology = Topology::bus;
    std::size_t replications = 0;

    SampleStat reachability; ///< over replications with at least one cell
    SampleStat avg_rate_bps;
    SampleStat max_rate_bps;
    SampleStat mean_wait_s;
    SampleStat mean_wait_cell_s;
    SampleStat forced_crossings;

    bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
    std::vector<SweepRow> rows; ///< density-major, then topology

    bool operator==(const SweepResult&) const = default;
};

SweepRow run_sweep_cell(const SimulationConfig& cfg, const TrafficModel& model, std::span<const double> densities,
                        std::span<const Topology> topologies, std::size_t density_index,
                        std::size_t topology_index, std::size_t replications);

/// `threads` = 0 picks the hardware concurrency. Results do not depend on
/// the thread count.
SweepResult run_sweep(const SimulationConfig& cfg, std::span<const double> densities,
                      std::span<const Topology> topologies, std::size_t replications, unsigned threads = 1);

} // namespace plcfh
