#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace plcfh {

enum class HubMode { center, uniform_random };
enum class Topology { bus, tree, chain };

// Unit used to read the "kb" thresholds of the traffic profile.
enum class SizeUnit { kilobit, kilobyte };

std::string_view to_string(HubMode m);
std::string_view to_string(Topology t);
std::string_view to_string(SizeUnit u);

// Throw ConfigError on an unknown name.
HubMode parse_hub_mode(std::string_view s);
Topology parse_topology(std::string_view s);
SizeUnit parse_size_unit(std::string_view s);

struct SimulationConfig {
    // territory and deployment
    double side_m = 700.0;
    double density = 0.25;
    double cell_area_m2 = 400.0;
    HubMode hub_mode = HubMode::center;
    double sector_anchor_rad = 0.0;

    // power grid
    int n_branches = 6;
    double max_wire_m = 300.0;
    int max_cells_per_branch = 35;
    Topology topology = Topology::bus;

    // traffic
    double mean_interarrival_s = 10.0;
    double data_fraction = 0.97;
    double voice_rate_bps = 128000.0;
    double voice_mean_duration_s = 100.0;
    double volume_cap_bits = 1e9;
    SizeUnit size_unit = SizeUnit::kilobit;

    // time and Monte Carlo controls
    double horizon_s = 3600.0;
    double dt_s = 1.0;
    int replications = 10;
    std::uint64_t master_seed = 1;

    // also report the load offered by every cell, served or not
    bool count_unserved_offered = false;

    // Throws ConfigError naming the first offending field and its bound.
    void validate() const;

    bool operator==(const SimulationConfig&) const = default;
};

} // namespace plcfh
