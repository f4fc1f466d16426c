#include "plcfh/cli/commands.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "plcfh/cli/config_file.hpp"
#include "plcfh/cli/output.hpp"
#include "plcfh/cli/plot.hpp"
#include "plcfh/error.hpp"
#include "plcfh/gridgen.hpp"
#include "plcfh/simulator.hpp"
#include "plcfh/version.hpp"

namespace plcfh::cli {

namespace fs = std::filesystem;

namespace {

void write_manifest(const fs::path& out_dir, const RunManifest& manifest)
{
    write_file_atomic(out_dir / "run_manifest.json", manifest_json(manifest, true).dump(2) + "\n");
}

} // namespace

fs::path cmd_generate(const SimulationConfig& cfg, const fs::path& out_dir)
{
    cfg.validate();
    const auto manifest = RunManifest::make(cfg, fit_traffic_model(cfg));
    const auto seed = replication_seed(cfg.master_seed, 0, 0, 0);
    const auto [dep, grid] = build_scenario(cfg, seed);
    check_grid_invariants(grid);

    const auto path = out_dir / "layout.json";
    write_file_atomic(path, layout_json(dep, grid, manifest, seed).dump(2) + "\n");
    write_manifest(out_dir, manifest);
    return path;
}

fs::path cmd_simulate(const SimulationConfig& cfg, const fs::path& out_dir)
{
    cfg.validate();
    const auto model = fit_traffic_model(cfg);
    const auto manifest = RunManifest::make(cfg, model);

    // Replication k is replication k of a one-cell sweep.
    std::vector<MetricsReport> reports;
    for (int k = 0; k < cfg.replications; ++k)
        reports.push_back(run_replication(cfg, model, replication_seed(cfg.master_seed, 0, 0, static_cast<std::size_t>(k))));

    const auto path = out_dir / "metrics.csv";
    write_file_atomic(path, simulate_csv(reports, manifest));
    write_manifest(out_dir, manifest);
    return path;
}

SweepOutputs cmd_sweep(const SimulationConfig& cfg, const std::vector<double>& densities,
                       const std::vector<Topology>& topologies, const fs::path& out_dir, bool plots, unsigned threads)
{
    if (densities.empty() || topologies.empty())
        throw ConfigError("sweep needs at least one density and one topology");
    cfg.validate();
    const auto manifest = RunManifest::make(cfg, fit_traffic_model(cfg));
    const auto result =
        run_sweep(cfg, densities, topologies, static_cast<std::size_t>(cfg.replications), threads);

    SweepOutputs out;
    out.table = out_dir / "sweep.csv";
    write_file_atomic(out.table, sweep_csv(result, manifest));
    if (plots) {
        const std::pair<const char*, LinePlot> figures[] = {
            {"reachability.svg", reachability_plot(result)},
            {"traffic_avg.svg", traffic_plot(result, TrafficStat::average)},
            {"traffic_max.svg", traffic_plot(result, TrafficStat::maximum)},
        };
        for (const auto& [name, plot] : figures) {
            out.plots.push_back(out_dir / name);
            write_file_atomic(out.plots.back(), render_svg(plot));
        }
    }
    write_manifest(out_dir, manifest);
    return out;
}

namespace {

void add_scenario_options(CLI::App& cmd, ConfigOverrides& o, std::string& config_path, std::string& out_dir)
{
    cmd.add_option("--config", config_path, "JSON config file");
    cmd.add_option("--density", o.density, "fraction of the territory covered by cells");
    cmd.add_option("--side", o.side_m, "side of the square territory [m]");
    cmd.add_option("--cell-area", o.cell_area_m2, "coverage area per cell [m^2]");
    cmd.add_option("--max-wire", o.max_wire_m, "maximum hub-to-cell wire distance [m]");
    cmd.add_option("--branches", o.n_branches, "main branches leaving the hub");
    cmd.add_option("--branch-cap", o.max_cells_per_branch, "served cells per main branch");
    cmd.add_option("--interarrival", o.mean_interarrival_s, "mean time between requests per cell [s]");
    cmd.add_option("--horizon", o.horizon_s, "simulated time [s]");
    cmd.add_option("--dt", o.dt_s, "aggregation step [s]");
    cmd.add_option("--reps", o.replications, "replications");
    cmd.add_option("--seed", o.master_seed, "master seed");
    cmd.add_option("--hub", o.hub_mode, "hub placement")->check(CLI::IsMember({"center", "uniform"}));
    cmd.add_option("--out", out_dir, "output directory")->capture_default_str();
}

ConfigOverrides overrides_from_topology(ConfigOverrides o, const std::vector<std::string>& topo)
{
    if (topo.size() > 1)
        throw ConfigError("--topology: this command takes a single topology");
    if (!topo.empty())
        o.topology = topo.front();
    return o;
}

} // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"Monte Carlo assessment of power-line front-haul for small radio cells"};
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.require_subcommand(1);

    ConfigOverrides overrides;
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> topologies;
    std::vector<double> densities;
    std::string plots = "on";
    bool count_unserved = false;
    unsigned threads = 0;

    auto* gen = app.add_subcommand("generate", "write the layout of one deployment and its power grid");
    auto* sim = app.add_subcommand("simulate", "run replications and write per-replication metrics");
    auto* sweep = app.add_subcommand("sweep", "sweep densities and topologies, write aggregate table and plots");
    for (auto* cmd : {gen, sim, sweep}) {
        add_scenario_options(*cmd, overrides, config_path, out_dir);
        cmd->add_option("--topology", topologies, "bus, tree or chain (sweep: comma list)")
            ->delimiter(',')
            ->check(CLI::IsMember({"bus", "tree", "chain"}));
    }
    for (auto* cmd : {sim, sweep})
        cmd->add_flag("--count-unserved", count_unserved, "also report load offered by unserved cells");
    sweep->add_option("--densities", densities, "comma-separated densities")->delimiter(',');
    sweep->add_option("--plots", plots, "write SVG plots")->check(CLI::IsMember({"on", "off"}));
    sweep->add_option("--threads", threads, "worker threads, 0 = all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        std::optional<fs::path> file;
        if (!config_path.empty())
            file = config_path;
        const char* env = std::getenv("SIM_SEED");
        std::optional<std::string_view> env_seed;
        if (env)
            env_seed = env;

        if (count_unserved)
            overrides.count_unserved_offered = true;

        if (sweep->parsed()) {
            auto cfg = parse_config(file, overrides, env_seed);
            std::vector<Topology> topo;
            for (const auto& t : topologies)
                topo.push_back(parse_topology(t));
            if (topo.empty())
                topo = {Topology::bus, Topology::tree, Topology::chain};
            if (densities.empty())
                densities = {0.1, 0.25, 0.5, 0.75, 1.0};
            for (double d : densities)
                if (!(d >= 0))
                    throw ConfigError("--densities: density must be >= 0");
            const auto outs = cmd_sweep(cfg, densities, topo, out_dir, plots == "on", threads);
            std::cout << outs.table.string() << "\n";
            for (const auto& p : outs.plots)
                std::cout << p.string() << "\n";
            return exit_ok;
        }

        const auto cfg = parse_config(file, overrides_from_topology(overrides, topologies), env_seed);
        const auto path = gen->parsed() ? cmd_generate(cfg, out_dir) : cmd_simulate(cfg, out_dir);
        std::cout << path.string() << "\n";
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const FitError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace plcfh::cli
