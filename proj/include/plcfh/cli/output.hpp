#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>

#include <json.hpp>

#include "plcfh/config.hpp"
#include "plcfh/deployment.hpp"
#include "plcfh/gridgen.hpp"
#include "plcfh/simulator.hpp"
#include "plcfh/traffic.hpp"

namespace plcfh::cli {

/// Provenance attached to every output.
struct RunManifest {
    SimulationConfig config;
    TrafficModel model;
    std::string tool_version;
    std::uint64_t master_seed = 0;
    std::string timestamp; ///< ISO-8601 UTC; only written to the side-car file

    static RunManifest make(const SimulationConfig& cfg, const TrafficModel& model);
};

/// `with_timestamp` is false for manifests embedded in data files, which
/// must not change between identical runs.
nlohmann::json manifest_json(const RunManifest& m, bool with_timestamp);

nlohmann::json traffic_model_json(const TrafficModel& m);

/// Shortest decimal text that reads back to the same double; "nan" for NaN.
std::string format_number(double v);

// ---- layout JSON ----

nlohmann::json layout_json(const CellDeployment& dep, const PowerGrid& grid, const RunManifest& manifest,
                           std::uint64_t replication_seed);

/// Inverse of layout_json for the deployment and grid parts.
std::pair<CellDeployment, PowerGrid> parse_layout(const nlohmann::json& doc);

// ---- CSV tables ----

/// Header of the per-replication table. `with_offered` appends the
/// offered-load column.
std::string simulate_csv_header(bool with_offered);
std::string simulate_csv(std::span<const MetricsReport> reports, const RunManifest& manifest);

std::string sweep_csv_header();
std::string sweep_csv(const SweepResult& result, const RunManifest& manifest);

/// Write through a temporary file in the same directory and rename over
/// the destination. Throws IoError naming the path.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace plcfh::cli
