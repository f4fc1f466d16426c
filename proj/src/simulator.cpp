#include "plcfh/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "plcfh/error.hpp"
#include "plcfh/random.hpp"

namespace plcfh {

namespace {

// stream tags under a replication seed
constexpr std::uint64_t deployment_stream = 0;
constexpr std::uint64_t traffic_stream = 1;

RateSeries empty_series(const PowerGrid& grid, double dt_s, double horizon_s)
{
    if (!(dt_s > 0) || !(horizon_s >= dt_s))
        throw ConfigError("aggregation needs dt_s > 0 and horizon_s >= dt_s");
    int n_branches = grid.n_branches;
    for (int b : grid.branch)
        n_branches = std::max(n_branches, b + 1);

    RateSeries s;
    s.dt_s = dt_s;
    s.horizon_s = horizon_s;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon_s / dt_s - 1e-9));
    s.hub.assign(steps, 0.0);
    s.branches.assign(static_cast<std::size_t>(n_branches), std::vector<double>(steps, 0.0));
    return s;
}

void accumulate(RateSeries& s, const Session& session, int branch)
{
    const double a = session.start_s;
    const double b = std::min(session.end_s(), s.horizon_s);
    if (!(b > a))
        return;
    const std::size_t last = s.steps() - 1;
    const auto k0 = std::min(static_cast<std::size_t>(std::floor(a / s.dt_s)), last);
    auto& lane = s.branches[static_cast<std::size_t>(branch)];
    for (std::size_t k = k0; k <= last; ++k) {
        const double lo = std::max(a, static_cast<double>(k) * s.dt_s);
        if (lo >= b)
            break;
        const double hi = std::min(b, k == last ? s.horizon_s : static_cast<double>(k + 1) * s.dt_s);
        if (hi <= lo)
            continue;
        const double contribution = session.rate_bps * (hi - lo) / s.step_length(k);
        s.hub[k] += contribution;
        lane[k] += contribution;
    }
}

RateSeries aggregate(std::span<const Session> sessions, const PowerGrid& grid, double dt_s, double horizon_s,
                     bool served_only)
{
    auto s = empty_series(grid, dt_s, horizon_s);
    for (const auto& session : sessions) {
        const auto c = static_cast<std::size_t>(session.cell_id);
        if (c >= grid.cell_count())
            throw NotFoundError("session for unknown cell " + std::to_string(session.cell_id));
        if (served_only && !grid.served[c])
            continue;
        accumulate(s, session, std::max(grid.branch[c], 0));
    }
    return s;
}

} // namespace

double RateSeries::step_length(std::size_t k) const
{
    if (k + 1 < steps())
        return dt_s;
    return horizon_s - static_cast<double>(k) * dt_s;
}

RateSeries aggregate_rate_series(std::span<const Session> sessions, const PowerGrid& grid, double dt_s,
                                 double horizon_s)
{
    return aggregate(sessions, grid, dt_s, horizon_s, true);
}

RateSeries aggregate_offered_series(std::span<const Session> sessions, const PowerGrid& grid, double dt_s,
                                    double horizon_s)
{
    return aggregate(sessions, grid, dt_s, horizon_s, false);
}

double time_average(std::span<const double> values, const RateSeries& series)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        acc += values[k] * series.step_length(k);
    return acc / series.horizon_s;
}

MetricsReport compute_metrics(const RateSeries& series, const PowerGrid& grid, std::span<const Session> sessions)
{
    MetricsReport r;
    r.n_cells = grid.cell_count();
    r.n_served = served_count(grid);
    r.reachability = reachability_fraction(grid);
    r.forced_crossings = grid.forced_crossings;

    r.avg_rate_bps = time_average(series.hub, series);
    r.max_rate_bps = series.hub.empty() ? 0.0 : *std::max_element(series.hub.begin(), series.hub.end());
    for (const auto& lane : series.branches)
        r.per_branch_avg_bps.push_back(time_average(lane, series));

    std::map<int, std::vector<double>> starts;
    for (const auto& s : sessions)
        if (static_cast<std::size_t>(s.cell_id) < grid.cell_count() && grid.served[static_cast<std::size_t>(s.cell_id)])
            starts[s.cell_id].push_back(s.start_s);

    double gap_sum = 0.0;
    std::size_t gap_count = 0;
    double cell_mean_sum = 0.0;
    std::size_t cells_with_gaps = 0;
    for (auto& [cell, t] : starts) {
        if (t.size() < 2)
            continue;
        std::sort(t.begin(), t.end());
        const double span = t.back() - t.front();
        gap_sum += span;
        gap_count += t.size() - 1;
        cell_mean_sum += span / static_cast<double>(t.size() - 1);
        ++cells_with_gaps;
    }
    if (gap_count > 0) {
        r.mean_wait_s = gap_sum / static_cast<double>(gap_count);
        r.mean_wait_cell_s = cell_mean_sum / static_cast<double>(cells_with_gaps);
    }
    return r;
}

std::pair<CellDeployment, PowerGrid> build_scenario(const SimulationConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Rng rng(derive_seed(seed, deployment_stream));
    auto dep = deploy(cfg, rng);
    auto grid = build_grid(dep, cfg);
    return {std::move(dep), std::move(grid)};
}

Replication simulate_replication(const SimulationConfig& cfg, const TrafficModel& model, std::uint64_t seed)
{
    Replication rep;
    std::tie(rep.deployment, rep.grid) = build_scenario(cfg, seed);

    for (const auto& cell : rep.deployment.cells) {
        Rng rng(derive_seed(seed, traffic_stream, static_cast<std::uint64_t>(cell.id)));
        auto sessions = generate_cell_sessions(rng, model, cell.id, cfg.horizon_s);
        rep.sessions.insert(rep.sessions.end(), sessions.begin(), sessions.end());
    }

    rep.series = aggregate_rate_series(rep.sessions, rep.grid, cfg.dt_s, cfg.horizon_s);
    rep.report = compute_metrics(rep.series, rep.grid, rep.sessions);
    rep.report.seed = seed;
    rep.report.config = cfg;
    if (cfg.count_unserved_offered) {
        const auto offered = aggregate_offered_series(rep.sessions, rep.grid, cfg.dt_s, cfg.horizon_s);
        rep.report.offered_avg_rate_bps = time_average(offered.hub, offered);
    }
    return rep;
}

MetricsReport run_replication(const SimulationConfig& cfg, const TrafficModel& model, std::uint64_t seed)
{
    return simulate_replication(cfg, model, seed).report;
}

MetricsReport run_replication(const SimulationConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    return run_replication(cfg, fit_traffic_model(cfg), seed);
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t density_index, std::size_t topology_index,
                               std::size_t rep)
{
    return derive_seed(master, density_index, topology_index, rep);
}

SampleStat summarize(std::span<const double> values)
{
    SampleStat s;
    s.count = values.size();
    if (s.count == 0)
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count >= 2) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        const double var = ss / static_cast<double>(s.count - 1);
        s.stderr_ = std::sqrt(var / static_cast<double>(s.count));
    }
    return s;
}

namespace {

SimulationConfig cell_config(const SimulationConfig& cfg, double density, Topology topology)
{
    SimulationConfig c = cfg;
    c.density = density;
    c.topology = topology;
    c.validate();
    return c;
}

SweepRow summarize_row(std::size_t i, std::size_t j, double density, Topology topology,
                       std::span<const MetricsReport> reports)
{
    SweepRow row;
    row.density_index = i;
    row.topology_index = j;
    row.density = density;
    row.topology = topology;
    row.replications = reports.size();

    std::vector<double> reach, avg, max, wait, wait_cell, forced;
    for (const auto& r : reports) {
        if (r.reachability)
            reach.push_back(*r.reachability);
        avg.push_back(r.avg_rate_bps);
        max.push_back(r.max_rate_bps);
        if (r.mean_wait_s)
            wait.push_back(*r.mean_wait_s);
        if (r.mean_wait_cell_s)
            wait_cell.push_back(*r.mean_wait_cell_s);
        forced.push_back(r.forced_crossings);
    }
    row.reachability = summarize(reach);
    row.avg_rate_bps = summarize(avg);
    row.max_rate_bps = summarize(max);
    row.mean_wait_s = summarize(wait);
    row.mean_wait_cell_s = summarize(wait_cell);
    row.forced_crossings = summarize(forced);
    return row;
}

} // namespace

SweepRow run_sweep_cell(const SimulationConfig& cfg, const TrafficModel& model, std::span<const double> densities,
                        std::span<const Topology> topologies, std::size_t density_index,
                        std::size_t topology_index, std::size_t replications)
{
    const auto c = cell_config(cfg, densities[density_index], topologies[topology_index]);
    std::vector<MetricsReport> reports;
    reports.reserve(replications);
    for (std::size_t k = 0; k < replications; ++k)
        reports.push_back(run_replication(c, model, replication_seed(cfg.master_seed, density_index, topology_index, k)));
    return summarize_row(density_index, topology_index, c.density, c.topology, reports);
}

SweepResult run_sweep(const SimulationConfig& cfg, std::span<const double> densities,
                      std::span<const Topology> topologies, std::size_t replications, unsigned threads)
{
    if (replications < 1)
        throw ConfigError("replications must be >= 1");
    cfg.validate();
    const auto model = fit_traffic_model(cfg);

    const std::size_t n_cells = densities.size() * topologies.size();
    std::vector<SimulationConfig> configs;
    for (std::size_t i = 0; i < densities.size(); ++i)
        for (std::size_t j = 0; j < topologies.size(); ++j)
            configs.push_back(cell_config(cfg, densities[i], topologies[j]));

    // One slot per replication; workers claim replications in any order.
    std::vector<MetricsReport> reports(n_cells * replications);
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        try {
            for (std::size_t t = next++; t < reports.size(); t = next++) {
                const std::size_t cell = t / replications;
                const std::size_t k = t % replications;
                const std::size_t i = cell / topologies.size();
                const std::size_t j = cell % topologies.size();
                reports[t] = run_replication(configs[cell], model, replication_seed(cfg.master_seed, i, j, k));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = reports.size();
        }
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult result;
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const std::size_t i = cell / topologies.size();
        const std::size_t j = cell % topologies.size();
        result.rows.push_back(summarize_row(i, j, densities[i], topologies[j],
                                            std::span(reports).subspan(cell * replications, replications)));
    }
    return result;
}

} // namespace plcfh
