#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "plcfh/error.hpp"
#include "plcfh/simulator.hpp"

using namespace plcfh;

namespace {

// n cells, all wired and served, cell i on branch i % n_branches
PowerGrid served_grid(std::size_t n, int n_branches = 1)
{
    auto g = empty_grid({0, 0}, n, n_branches);
    for (std::size_t i = 0; i < n; ++i) {
        g.cell_node[i] = static_cast<int>(i) + 1;
        g.branch[i] = static_cast<int>(i) % n_branches;
        g.wire_distance_m[i] = 1.0;
        g.served[i] = true;
    }
    return g;
}

Session voice(int cell, double start, double duration)
{
    return {cell, SessionClass::voice, start, duration, 128000.0};
}

bool hub_is_branch_sum(const RateSeries& s)
{
    for (std::size_t k = 0; k < s.steps(); ++k) {
        double sum = 0;
        for (const auto& lane : s.branches)
            sum += lane[k];
        if (std::abs(sum - s.hub[k]) > 1e-6 * std::max(1.0, std::abs(s.hub[k])))
            return false;
    }
    return true;
}

SimulationConfig short_config()
{
    SimulationConfig cfg;
    cfg.horizon_s = 300;
    return cfg;
}

} // namespace

TEST_CASE("aggregate: one constant-rate session")
{
    const auto g = served_grid(1);
    const std::vector<Session> s{voice(0, 0, 100)};
    const auto series = aggregate_rate_series(s, g, 1.0, 3600);
    REQUIRE(series.steps() == 3600);
    for (std::size_t k = 0; k < 3600; ++k)
        CHECK(series.hub[k] == (k < 100 ? 128000.0 : 0.0));

    const auto m = compute_metrics(series, g, s);
    CHECK(m.avg_rate_bps == doctest::Approx(128000.0 * 100 / 3600));
    CHECK(m.max_rate_bps == 128000.0);
}

TEST_CASE("aggregate: partial overlap is prorated")
{
    const auto g = served_grid(1);
    const std::vector<Session> s{voice(0, 9.5, 2.0)};
    const auto series = aggregate_rate_series(s, g, 1.0, 20);
    CHECK(series.hub[9] == doctest::Approx(64000));
    CHECK(series.hub[10] == doctest::Approx(128000));
    CHECK(series.hub[11] == doctest::Approx(64000));
    CHECK(series.hub[12] == 0.0);
}

TEST_CASE("aggregate: sessions past the horizon are clipped")
{
    const auto g = served_grid(1);
    const std::vector<Session> s{voice(0, 8, 100)};
    const auto series = aggregate_rate_series(s, g, 1.0, 10);
    CHECK(series.hub[7] == 0.0);
    CHECK(series.hub[8] == 128000.0);
    CHECK(series.hub[9] == 128000.0);
}

TEST_CASE("aggregate: a horizon that is not a multiple of dt")
{
    const auto g = served_grid(1);
    const std::vector<Session> s{voice(0, 0, 100)};
    const auto series = aggregate_rate_series(s, g, 4.0, 10);
    REQUIRE(series.steps() == 3);
    CHECK(series.step_length(2) == doctest::Approx(2.0));
    CHECK(series.hub[2] == doctest::Approx(128000));
    CHECK(time_average(series.hub, series) == doctest::Approx(128000));
}

TEST_CASE("aggregate: branch lanes add up to the hub")
{
    const auto g = served_grid(2, 2);
    const std::vector<Session> s{voice(0, 0, 10), voice(1, 20, 10)};
    const auto series = aggregate_rate_series(s, g, 1.0, 40);
    CHECK(hub_is_branch_sum(series));
    CHECK(series.branches[0][5] == 128000.0);
    CHECK(series.branches[1][5] == 0.0);
    CHECK(series.branches[1][25] == 128000.0);
}

TEST_CASE("aggregate: unserved cells do not count")
{
    auto g = served_grid(2);
    g.served[1] = false;
    const std::vector<Session> s{voice(0, 0, 10), voice(1, 0, 10)};
    const auto served = aggregate_rate_series(s, g, 1.0, 20);
    CHECK(served.hub[0] == 128000.0);
    const auto offered = aggregate_offered_series(s, g, 1.0, 20);
    CHECK(offered.hub[0] == 256000.0);

    const std::vector<Session> bad{voice(9, 0, 1)};
    CHECK_THROWS_AS(aggregate_rate_series(bad, g, 1.0, 20), NotFoundError);
}

TEST_CASE("compute_metrics: empty inputs")
{
    const auto g = served_grid(3);
    const auto series = aggregate_rate_series({}, g, 1.0, 100);
    const auto m = compute_metrics(series, g, {});
    CHECK(m.avg_rate_bps == 0.0);
    CHECK(m.max_rate_bps == 0.0);
    CHECK_FALSE(m.mean_wait_s.has_value());
    CHECK(*m.reachability == 1.0);

    auto none = served_grid(2);
    none.served = {false, false};
    const std::vector<Session> s{voice(0, 0, 10), voice(0, 5, 10), voice(1, 1, 1)};
    const auto m2 = compute_metrics(aggregate_rate_series(s, none, 1.0, 100), none, s);
    CHECK(m2.avg_rate_bps == 0.0);
    CHECK(*m2.reachability == 0.0);
    CHECK_FALSE(m2.mean_wait_s.has_value());
}

TEST_CASE("compute_metrics: pooled and per-cell waits")
{
    const auto g = served_grid(2);
    // cell 0 gaps {2, 4}; cell 1 gap {9}
    const std::vector<Session> s{voice(0, 1, 1), voice(0, 3, 1), voice(0, 7, 1), voice(1, 0, 1), voice(1, 9, 1)};
    const auto m = compute_metrics(aggregate_rate_series(s, g, 1.0, 20), g, s);
    CHECK(*m.mean_wait_s == doctest::Approx(15.0 / 3));
    CHECK(*m.mean_wait_cell_s == doctest::Approx((3.0 + 9.0) / 2));
}

TEST_CASE("compute_metrics: pooled wait over about 1e6 gaps")
{
    const std::size_t cells = 300;
    const auto g = served_grid(cells);
    const auto model = fit_traffic_model(SimulationConfig{});
    std::vector<Session> all;
    for (std::size_t c = 0; c < cells; ++c) {
        Rng rng(derive_seed(5, c));
        auto s = generate_cell_sessions(rng, model, static_cast<int>(c), 34000);
        all.insert(all.end(), s.begin(), s.end());
    }
    REQUIRE(all.size() > 1000000);
    const auto m = compute_metrics(aggregate_rate_series(all, g, 10.0, 34000), g, all);
    CHECK(std::abs(*m.mean_wait_s - 10.0) < 0.05);
}

TEST_CASE("run_replication: empty deployment")
{
    auto cfg = short_config();
    cfg.density = 0.0;
    const auto m = run_replication(cfg, 1);
    CHECK(m.n_cells == 0);
    CHECK_FALSE(m.reachability.has_value());
    CHECK(m.avg_rate_bps == 0.0);
    CHECK(m.max_rate_bps == 0.0);
}

TEST_CASE("run_replication: deterministic per seed")
{
    const auto cfg = short_config();
    CHECK(run_replication(cfg, 77) == run_replication(cfg, 77));
    CHECK_FALSE(run_replication(cfg, 77) == run_replication(cfg, 78));
}

TEST_CASE("run_replication: default scenario against the offered-load formula")
{
    SimulationConfig cfg;
    cfg.horizon_s = 1e4;
    const auto model = fit_traffic_model(cfg);
    const auto m = run_replication(cfg, model, 2024);
    const double expected = static_cast<double>(m.n_served) * offered_rate_per_cell(model);
    CHECK(m.avg_rate_bps > 0.7 * expected);
    CHECK(m.avg_rate_bps < 1.3 * expected);
    CHECK(m.max_rate_bps >= m.avg_rate_bps);
    CHECK(m.per_branch_avg_bps.size() == 6);
}

TEST_CASE("replication invariants: lane sums, max >= avg, unserved ablation")
{
    const auto base = short_config();
    const auto model = fit_traffic_model(base);
    for (auto topo : {Topology::bus, Topology::tree, Topology::chain}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto cfg = base;
            cfg.topology = topo;
            cfg.density = 0.1 + 0.2 * static_cast<double>(seed);
            const auto rep = simulate_replication(cfg, model, seed);
            CHECK(hub_is_branch_sum(rep.series));
            CHECK(rep.report.max_rate_bps >= rep.report.avg_rate_bps);
            CHECK(std::all_of(rep.series.hub.begin(), rep.series.hub.end(), [](double v) { return v >= 0; }));

            std::vector<Session> kept;
            std::copy_if(rep.sessions.begin(), rep.sessions.end(), std::back_inserter(kept),
                         [&](const Session& s) { return rep.grid.served[static_cast<std::size_t>(s.cell_id)]; });
            CHECK(aggregate_rate_series(kept, rep.grid, cfg.dt_s, cfg.horizon_s) == rep.series);
        }
    }
}

TEST_CASE("a longer wire limit only adds served cells")
{
    const auto base = short_config();
    const auto model = fit_traffic_model(base);
    for (auto topo : {Topology::bus, Topology::tree, Topology::chain}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            auto cfg = base;
            cfg.topology = topo;
            cfg.density = 0.15;
            cfg.max_wire_m = 200;
            const auto small = simulate_replication(cfg, model, seed);
            cfg.max_wire_m = 350;
            const auto large = simulate_replication(cfg, model, seed);
            for (std::size_t c = 0; c < small.grid.cell_count(); ++c)
                if (small.grid.served[c])
                    CHECK(large.grid.served[c]);
            CHECK(large.report.avg_rate_bps >= small.report.avg_rate_bps * (1 - 1e-12));
        }
    }
}

TEST_CASE("count_unserved_offered adds the offered load")
{
    auto cfg = short_config();
    cfg.count_unserved_offered = true;
    const auto m = run_replication(cfg, 3);
    REQUIRE(m.offered_avg_rate_bps.has_value());
    CHECK(*m.offered_avg_rate_bps >= m.avg_rate_bps);
    CHECK_FALSE(run_replication(short_config(), 3).offered_avg_rate_bps.has_value());
}

TEST_CASE("summarize")
{
    const std::vector<double> one{4.0};
    const auto s1 = summarize(one);
    CHECK(s1.count == 1);
    CHECK(s1.mean == 4.0);
    CHECK_FALSE(s1.stderr_.has_value());

    const std::vector<double> v{1, 2, 3, 4};
    const auto s = summarize(v);
    CHECK(s.mean == 2.5);
    CHECK(*s.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("run_sweep: shape and degenerate statistics")
{
    auto cfg = short_config();
    cfg.horizon_s = 60;
    const std::vector<double> dens{0.25};
    const std::vector<Topology> topo{Topology::bus, Topology::tree, Topology::chain};
    const auto r = run_sweep(cfg, dens, topo, 100);
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) {
        CHECK(row.replications == 100);
        CHECK(row.reachability.count == 100);
        CHECK(row.reachability.stderr_.has_value());
    }
    CHECK(r.rows[0].topology == Topology::bus);
    CHECK(r.rows[2].topology == Topology::chain);

    const auto single = run_sweep(cfg, dens, topo, 1);
    for (const auto& row : single.rows)
        CHECK_FALSE(row.reachability.stderr_.has_value());
    CHECK_THROWS_AS(run_sweep(cfg, dens, topo, 0), ConfigError);
}

TEST_CASE("run_sweep: rows are independent of execution order and thread count")
{
    auto cfg = short_config();
    cfg.horizon_s = 120;
    const std::vector<double> dens{0.05, 0.2};
    const std::vector<Topology> topo{Topology::bus, Topology::chain};
    const auto model = fit_traffic_model(cfg);

    const auto serial = run_sweep(cfg, dens, topo, 4, 1);
    const auto threaded = run_sweep(cfg, dens, topo, 4, 3);
    CHECK(serial == threaded);

    // each cell on its own, in reverse order
    for (std::size_t c = dens.size() * topo.size(); c-- > 0;) {
        const auto row = run_sweep_cell(cfg, model, dens, topo, c / topo.size(), c % topo.size(), 4);
        CHECK(row == serial.rows[c]);
    }
}

TEST_CASE("replication seeds are positional")
{
    CHECK(replication_seed(1, 0, 0, 0) == replication_seed(1, 0, 0, 0));
    CHECK(replication_seed(1, 0, 0, 1) != replication_seed(1, 0, 0, 0));
    CHECK(replication_seed(1, 1, 0, 0) != replication_seed(1, 0, 1, 0));
    CHECK(replication_seed(2, 0, 0, 0) != replication_seed(1, 0, 0, 0));
}
