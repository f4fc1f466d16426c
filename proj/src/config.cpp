#include "plcfh/config.hpp"

#include <cmath>

#include "plcfh/error.hpp"

namespace plcfh {

std::string_view to_string(HubMode m)
{
    return m == HubMode::center ? "center" : "uniform";
}

std::string_view to_string(Topology t)
{
    switch (t) {
    case Topology::bus:
        return "bus";
    case Topology::tree:
        return "tree";
    case Topology::chain:
        return "chain";
    }
    return "?";
}

std::string_view to_string(SizeUnit u)
{
    return u == SizeUnit::kilobit ? "kilobit" : "kilobyte";
}

HubMode parse_hub_mode(std::string_view s)
{
    if (s == "center")
        return HubMode::center;
    if (s == "uniform" || s == "uniform-random")
        return HubMode::uniform_random;
    throw ConfigError("hub_mode: expected one of center, uniform; got '" + std::string(s) + "'");
}

Topology parse_topology(std::string_view s)
{
    if (s == "bus")
        return Topology::bus;
    if (s == "tree")
        return Topology::tree;
    if (s == "chain")
        return Topology::chain;
    throw ConfigError("topology: expected one of bus, tree, chain; got '" + std::string(s) + "'");
}

SizeUnit parse_size_unit(std::string_view s)
{
    if (s == "kilobit")
        return SizeUnit::kilobit;
    if (s == "kilobyte")
        return SizeUnit::kilobyte;
    throw ConfigError("size_unit: expected one of kilobit, kilobyte; got '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const char* field, const char* bound)
{
    if (!ok)
        throw ConfigError(std::string(field) + " must be " + bound);
}

} // namespace

void SimulationConfig::validate() const
{
    require(std::isfinite(side_m) && side_m > 0, "side_m", "> 0");
    require(std::isfinite(density) && density >= 0, "density", ">= 0");
    require(std::isfinite(cell_area_m2) && cell_area_m2 > 0, "cell_area_m2", "> 0");
    require(std::isfinite(sector_anchor_rad), "sector_anchor_rad", "finite");
    require(n_branches >= 1, "n_branches", ">= 1");
    require(std::isfinite(max_wire_m) && max_wire_m > 0, "max_wire_m", "> 0");
    require(max_cells_per_branch >= 1, "max_cells_per_branch", ">= 1");
    require(std::isfinite(mean_interarrival_s) && mean_interarrival_s > 0, "mean_interarrival_s", "> 0");
    require(data_fraction >= 0 && data_fraction <= 1, "data_fraction", "in [0, 1]");
    require(std::isfinite(voice_rate_bps) && voice_rate_bps > 0, "voice_rate_bps", "> 0");
    require(std::isfinite(voice_mean_duration_s) && voice_mean_duration_s > 0, "voice_mean_duration_s", "> 0");
    require(volume_cap_bits > 0, "volume_cap_bits", "> 0");
    require(std::isfinite(dt_s) && dt_s > 0, "dt_s", "> 0");
    require(std::isfinite(horizon_s) && horizon_s >= dt_s, "horizon_s", ">= dt_s");
    require(replications >= 1, "replications", ">= 1");
}

} // namespace plcfh
