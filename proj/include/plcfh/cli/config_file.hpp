#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plcfh/config.hpp"

namespace plcfh::cli {

/// Keys accepted in a JSON config file, in documentation order.
const std::vector<std::string>& config_keys();

nlohmann::json config_to_json(const SimulationConfig& cfg);

/// Apply the keys of a JSON object on top of `cfg`. Unknown keys and
/// mistyped values raise ConfigError; no validation of ranges.
void apply_config_json(SimulationConfig& cfg, const nlohmann::json& obj);

/// Command-line values; unset members leave the lower layers untouched.
struct ConfigOverrides {
    std::optional<double> side_m;
    std::optional<double> density;
    std::optional<double> cell_area_m2;
    std::optional<double> max_wire_m;
    std::optional<int> n_branches;
    std::optional<int> max_cells_per_branch;
    std::optional<double> mean_interarrival_s;
    std::optional<double> horizon_s;
    std::optional<double> dt_s;
    std::optional<int> replications;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::string> topology;
    std::optional<std::string> hub_mode;
    std::optional<bool> count_unserved_offered;
};

/// Layers, lowest first: built-in defaults, `env_seed` (the SIM_SEED
/// variable), the config file, then flag overrides. The result is
/// validated. An empty or whitespace-only file counts as an empty object.
SimulationConfig parse_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& flags,
                              std::optional<std::string_view> env_seed = std::nullopt);

} // namespace plcfh::cli
