#include "plcfh/cli/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "plcfh/error.hpp"

namespace plcfh::cli {

using nlohmann::json;

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys{
        "side_m",         "density",          "cell_area_m2",        "hub_mode",
        "sector_anchor_rad", "n_branches",    "max_wire_m",          "max_cells_per_branch",
        "topology",       "mean_interarrival_s", "data_fraction",    "voice_rate_bps",
        "voice_mean_duration_s", "volume_cap_bits", "size_unit",     "horizon_s",
        "dt_s",           "replications",     "master_seed",         "count_unserved_offered",
    };
    return keys;
}

json config_to_json(const SimulationConfig& c)
{
    return json{
        {"side_m", c.side_m},
        {"density", c.density},
        {"cell_area_m2", c.cell_area_m2},
        {"hub_mode", std::string(to_string(c.hub_mode))},
        {"sector_anchor_rad", c.sector_anchor_rad},
        {"n_branches", c.n_branches},
        {"max_wire_m", c.max_wire_m},
        {"max_cells_per_branch", c.max_cells_per_branch},
        {"topology", std::string(to_string(c.topology))},
        {"mean_interarrival_s", c.mean_interarrival_s},
        {"data_fraction", c.data_fraction},
        {"voice_rate_bps", c.voice_rate_bps},
        {"voice_mean_duration_s", c.voice_mean_duration_s},
        {"volume_cap_bits", c.volume_cap_bits},
        {"size_unit", std::string(to_string(c.size_unit))},
        {"horizon_s", c.horizon_s},
        {"dt_s", c.dt_s},
        {"replications", c.replications},
        {"master_seed", c.master_seed},
        {"count_unserved_offered", c.count_unserved_offered},
    };
}

namespace {

std::string valid_keys_message()
{
    std::string out;
    for (const auto& k : config_keys()) {
        if (!out.empty())
            out += ", ";
        out += k;
    }
    return out;
}

double get_number(const json& v, const std::string& key)
{
    if (!v.is_number())
        throw ConfigError(key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& key)
{
    if (!v.is_number_integer())
        throw ConfigError(key + ": expected an integer");
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& key)
{
    if (!v.is_string())
        throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
}

std::uint64_t parse_seed(std::string_view text, const char* source)
{
    std::uint64_t seed = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, seed);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(std::string(source) + ": expected an unsigned 64-bit integer, got '" + std::string(text) + "'");
    return seed;
}

} // namespace

void apply_config_json(SimulationConfig& c, const json& obj)
{
    if (!obj.is_object())
        throw ConfigError("config file: top level must be a JSON object");
    for (const auto& [key, v] : obj.items()) {
        if (key == "side_m")
            c.side_m = get_number(v, key);
        else if (key == "density")
            c.density = get_number(v, key);
        else if (key == "cell_area_m2")
            c.cell_area_m2 = get_number(v, key);
        else if (key == "hub_mode")
            c.hub_mode = parse_hub_mode(get_string(v, key));
        else if (key == "sector_anchor_rad")
            c.sector_anchor_rad = get_number(v, key);
        else if (key == "n_branches")
            c.n_branches = get_int(v, key);
        else if (key == "max_wire_m")
            c.max_wire_m = get_number(v, key);
        else if (key == "max_cells_per_branch")
            c.max_cells_per_branch = get_int(v, key);
        else if (key == "topology")
            c.topology = parse_topology(get_string(v, key));
        else if (key == "mean_interarrival_s")
            c.mean_interarrival_s = get_number(v, key);
        else if (key == "data_fraction")
            c.data_fraction = get_number(v, key);
        else if (key == "voice_rate_bps")
            c.voice_rate_bps = get_number(v, key);
        else if (key == "voice_mean_duration_s")
            c.voice_mean_duration_s = get_number(v, key);
        else if (key == "volume_cap_bits")
            c.volume_cap_bits = get_number(v, key);
        else if (key == "size_unit")
            c.size_unit = parse_size_unit(get_string(v, key));
        else if (key == "horizon_s")
            c.horizon_s = get_number(v, key);
        else if (key == "dt_s")
            c.dt_s = get_number(v, key);
        else if (key == "replications")
            c.replications = get_int(v, key);
        else if (key == "master_seed") {
            if (!v.is_number_unsigned())
                throw ConfigError("master_seed: expected an unsigned integer");
            c.master_seed = v.get<std::uint64_t>();
        } else if (key == "count_unserved_offered") {
            if (!v.is_boolean())
                throw ConfigError("count_unserved_offered: expected true or false");
            c.count_unserved_offered = v.get<bool>();
        } else
            throw ConfigError("unknown config key '" + key + "'; valid keys: " + valid_keys_message());
    }
}

SimulationConfig parse_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& f,
                              std::optional<std::string_view> env_seed)
{
    SimulationConfig c;
    if (env_seed && !env_seed->empty())
        c.master_seed = parse_seed(*env_seed, "SIM_SEED");

    if (file) {
        std::ifstream in(*file);
        if (!in)
            throw ConfigError("cannot open config file " + file->string());
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); });
        if (!blank) {
            json obj;
            try {
                obj = json::parse(text);
            } catch (const json::parse_error& e) {
                throw ConfigError("config file " + file->string() + ": " + e.what());
            }
            apply_config_json(c, obj);
        }
    }

    if (f.side_m) c.side_m = *f.side_m;
    if (f.density) c.density = *f.density;
    if (f.cell_area_m2) c.cell_area_m2 = *f.cell_area_m2;
    if (f.max_wire_m) c.max_wire_m = *f.max_wire_m;
    if (f.n_branches) c.n_branches = *f.n_branches;
    if (f.max_cells_per_branch) c.max_cells_per_branch = *f.max_cells_per_branch;
    if (f.mean_interarrival_s) c.mean_interarrival_s = *f.mean_interarrival_s;
    if (f.horizon_s) c.horizon_s = *f.horizon_s;
    if (f.dt_s) c.dt_s = *f.dt_s;
    if (f.replications) c.replications = *f.replications;
    if (f.master_seed) c.master_seed = *f.master_seed;
    if (f.topology) c.topology = parse_topology(*f.topology);
    if (f.hub_mode) c.hub_mode = parse_hub_mode(*f.hub_mode);
    if (f.count_unserved_offered) c.count_unserved_offered = *f.count_unserved_offered;

    c.validate();
    return c;
}

} // namespace plcfh::cli
