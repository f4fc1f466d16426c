#include "plcfh/cli/output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "plcfh/cli/config_file.hpp"
#include "plcfh/error.hpp"
#include "plcfh/version.hpp"

namespace plcfh::cli {

using nlohmann::json;

namespace {

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string_view kind_name(NodeKind k)
{
    switch (k) {
    case NodeKind::hub:
        return "hub";
    case NodeKind::cell_tap:
        return "cell-tap";
    case NodeKind::junction:
        return "junction";
    }
    return "?";
}

NodeKind parse_kind(const std::string& s)
{
    if (s == "hub")
        return NodeKind::hub;
    if (s == "cell-tap")
        return NodeKind::cell_tap;
    if (s == "junction")
        return NodeKind::junction;
    throw ConfigError("layout: unknown node kind '" + s + "'");
}

std::string opt(const std::optional<double>& v)
{
    return v ? format_number(*v) : "nan";
}

void put_stat(std::string& line, const SampleStat& s)
{
    line += ',';
    line += s.count ? format_number(s.mean) : "nan";
    line += ',';
    if (s.stderr_)
        line += format_number(*s.stderr_);
}

// '#'-prefixed provenance block placed above the CSV header row.
std::string provenance_block(const RunManifest& m)
{
    std::string out;
    out += "# tool=" + std::string(tool_name) + " " + m.tool_version + "\n";
    out += "# master_seed=" + std::to_string(m.master_seed) + "\n";
    out += "# config=" + config_to_json(m.config).dump() + "\n";
    out += "# traffic_model=" + traffic_model_json(m.model).dump() + "\n";
    return out;
}

} // namespace

RunManifest RunManifest::make(const SimulationConfig& cfg, const TrafficModel& model)
{
    RunManifest m;
    m.config = cfg;
    m.model = model;
    m.tool_version = plcfh::tool_version;
    m.master_seed = cfg.master_seed;
    m.timestamp = utc_now();
    return m;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

json traffic_model_json(const TrafficModel& m)
{
    return json{
        {"data_fraction", m.data_fraction},
        {"pareto_alpha", m.pareto_alpha},
        {"pareto_xm_bits", m.pareto_xm_bits},
        {"lognorm_mu", m.lognorm_mu},
        {"lognorm_sigma", m.lognorm_sigma},
        {"voice_rate_bps", m.voice_rate_bps},
        {"voice_mean_duration_s", m.voice_mean_duration_s},
        {"mean_interarrival_s", m.mean_interarrival_s},
        {"volume_cap_bits", m.volume_cap_bits},
    };
}

json manifest_json(const RunManifest& m, bool with_timestamp)
{
    json j{
        {"tool", tool_name},
        {"tool_version", m.tool_version},
        {"master_seed", m.master_seed},
        {"config", config_to_json(m.config)},
        {"traffic_model", traffic_model_json(m.model)},
    };
    if (with_timestamp)
        j["timestamp"] = m.timestamp;
    return j;
}

json layout_json(const CellDeployment& dep, const PowerGrid& grid, const RunManifest& manifest,
                 std::uint64_t replication_seed)
{
    json cells = json::array();
    for (const auto& c : dep.cells) {
        const auto i = static_cast<std::size_t>(c.id);
        cells.push_back({{"id", c.id},
                         {"x", c.pos.x},
                         {"y", c.pos.y},
                         {"radius", c.radius_m},
                         {"sector", c.sector},
                         {"wire_distance", grid.wire_distance_m[i]},
                         {"served", static_cast<bool>(grid.served[i])}});
    }
    json nodes = json::array();
    for (const auto& n : grid.nodes) {
        nodes.push_back({{"id", n.id},
                         {"x", n.pos.x},
                         {"y", n.pos.y},
                         {"kind", kind_name(n.kind)},
                         {"cell_id", n.cell_id >= 0 ? json(n.cell_id) : json(nullptr)},
                         {"sector", n.sector}});
    }
    json edges = json::array();
    for (const auto& e : grid.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"length", e.length_m}, {"sector", e.sector}});

    return json{
        {"manifest", manifest_json(manifest, false)},
        {"replication_seed", replication_seed},
        {"hub", {{"x", dep.hub.x}, {"y", dep.hub.y}}},
        {"n_branches", grid.n_branches},
        {"forced_crossings", grid.forced_crossings},
        {"cells", std::move(cells)},
        {"nodes", std::move(nodes)},
        {"edges", std::move(edges)},
    };
}

std::pair<CellDeployment, PowerGrid> parse_layout(const json& doc)
{
    try {
        CellDeployment dep;
        dep.hub = {doc.at("hub").at("x").get<double>(), doc.at("hub").at("y").get<double>()};
        const auto& cells = doc.at("cells");
        auto grid = empty_grid(dep.hub, cells.size(), doc.at("n_branches").get<int>());
        grid.nodes.clear();
        grid.forced_crossings = doc.at("forced_crossings").get<int>();

        for (const auto& jc : cells) {
            Cell c;
            c.id = jc.at("id").get<int>();
            c.pos = {jc.at("x").get<double>(), jc.at("y").get<double>()};
            c.radius_m = jc.at("radius").get<double>();
            c.sector = jc.at("sector").get<int>();
            if (c.id < 0 || static_cast<std::size_t>(c.id) != dep.cells.size())
                throw ConfigError("layout: cell ids must be dense and ordered");
            const auto i = static_cast<std::size_t>(c.id);
            const auto& wd = jc.at("wire_distance");
            grid.wire_distance_m[i] = wd.is_null() ? std::nan("") : wd.get<double>();
            grid.served[i] = jc.at("served").get<bool>();
            grid.branch[i] = c.sector;
            dep.cells.push_back(c);
        }
        for (const auto& jn : doc.at("nodes")) {
            GridNode n;
            n.id = jn.at("id").get<int>();
            n.pos = {jn.at("x").get<double>(), jn.at("y").get<double>()};
            n.kind = parse_kind(jn.at("kind").get<std::string>());
            n.cell_id = jn.at("cell_id").is_null() ? -1 : jn.at("cell_id").get<int>();
            n.sector = jn.at("sector").get<int>();
            if (n.cell_id >= 0)
                grid.cell_node.at(static_cast<std::size_t>(n.cell_id)) = n.id;
            grid.nodes.push_back(n);
        }
        for (const auto& je : doc.at("edges"))
            grid.edges.push_back(
                {je.at("a").get<int>(), je.at("b").get<int>(), je.at("length").get<double>(), je.at("sector").get<int>()});
        return {std::move(dep), std::move(grid)};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("layout: ") + e.what());
    }
}

std::string simulate_csv_header(bool with_offered)
{
    std::string h = "seed,topology,density,reachability,avg_rate_bps,max_rate_bps,mean_wait_s,forced_crossings";
    if (with_offered)
        h += ",offered_avg_rate_bps";
    return h;
}

std::string simulate_csv(std::span<const MetricsReport> reports, const RunManifest& manifest)
{
    const bool with_offered = manifest.config.count_unserved_offered;
    std::string out = provenance_block(manifest);
    out += simulate_csv_header(with_offered) + "\n";
    for (const auto& r : reports) {
        out += std::to_string(r.seed);
        out += ',';
        out += to_string(r.config.topology);
        out += ',' + format_number(r.config.density);
        out += ',' + opt(r.reachability);
        out += ',' + format_number(r.avg_rate_bps);
        out += ',' + format_number(r.max_rate_bps);
        out += ',' + opt(r.mean_wait_s);
        out += ',' + std::to_string(r.forced_crossings);
        if (with_offered)
            out += ',' + opt(r.offered_avg_rate_bps);
        out += '\n';
    }
    return out;
}

std::string sweep_csv_header()
{
    return "density,topology,replications,reachability_n,reachability_mean,reachability_stderr,"
           "avg_rate_bps_mean,avg_rate_bps_stderr,max_rate_bps_mean,max_rate_bps_stderr,"
           "mean_wait_s_mean,mean_wait_s_stderr,mean_wait_cell_s_mean,mean_wait_cell_s_stderr,"
           "forced_crossings_mean,forced_crossings_stderr";
}

std::string sweep_csv(const SweepResult& result, const RunManifest& manifest)
{
    std::string out = provenance_block(manifest);
    out += sweep_csv_header() + "\n";
    for (const auto& row : result.rows) {
        std::string line = format_number(row.density);
        line += ',';
        line += to_string(row.topology);
        line += ',' + std::to_string(row.replications);
        line += ',' + std::to_string(row.reachability.count);
        put_stat(line, row.reachability);
        put_stat(line, row.avg_rate_bps);
        put_stat(line, row.max_rate_bps);
        put_stat(line, row.mean_wait_s);
        put_stat(line, row.mean_wait_cell_s);
        put_stat(line, row.forced_crossings);
        out += line + "\n";
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

} // namespace plcfh::cli
