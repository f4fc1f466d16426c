#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "plcfh/error.hpp"
#include "plcfh/traffic.hpp"

using namespace plcfh;

namespace {

TrafficModel default_model()
{
    return fit_traffic_model(SimulationConfig{});
}

} // namespace

TEST_CASE("normal quantile oracle reproduces tabulated values")
{
    CHECK(oracle::normal_quantile(0.8) == doctest::Approx(0.84162).epsilon(1e-5));
    CHECK(oracle::normal_quantile(0.999) == doctest::Approx(3.09023).epsilon(1e-5));
}

TEST_CASE("size fit: defaults")
{
    const auto fit = fit_size_distribution();
    // frozen from the bisection oracle: alpha = 1.0479516371, xm = 2152.846717
    const double alpha = oracle::pareto_alpha(0.1, 0.9);
    CHECK(alpha == doctest::Approx(1.0479516371).epsilon(1e-10));
    CHECK(std::abs(fit.alpha - alpha) < 1e-10);
    CHECK(fit.xm_bits == doctest::Approx(10000 * std::pow(0.2, 1 / alpha)).epsilon(1e-10));
    CHECK(fit.xm_bits == doctest::Approx(2152.846717).epsilon(1e-9));

    // both constraints hold analytically
    CHECK(1 - std::pow(fit.xm_bits / 10000, fit.alpha) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(std::pow(0.1, 1 - 1 / fit.alpha) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("size fit: infeasible constraints")
{
    CHECK_THROWS_AS(fit_size_distribution(0.8, 10000, 0.1, 0.1), FitError);
    CHECK_THROWS_AS(fit_size_distribution(0.8, 10000, 0.5, 0.3), FitError);
    CHECK_THROWS_AS(fit_size_distribution(0.8, 10000, 0.1, 0.1 + 1e-12), FitError);
    CHECK_THROWS_AS(fit_size_distribution(1.2, 10000, 0.1, 0.9), FitError);
    CHECK_THROWS_AS(fit_size_distribution(0.8, 0, 0.1, 0.9), FitError);
}

TEST_CASE("duration fit: defaults")
{
    const auto fit = fit_duration_distribution();
    const double z1 = oracle::normal_quantile(0.8);
    const double z2 = oracle::normal_quantile(0.999);
    const double sigma = (std::log(200.0) - std::log(11.0)) / (z2 - z1);
    CHECK(fit.sigma == doctest::Approx(sigma).epsilon(1e-9));
    CHECK(fit.mu == doctest::Approx(std::log(11.0) - z1 * sigma).epsilon(1e-9));
    CHECK(fit.mu == doctest::Approx(1.3123109981).epsilon(1e-9));
    CHECK(fit.sigma == doctest::Approx(1.2898727259).epsilon(1e-9));
    CHECK(std::exp(fit.mu) == doctest::Approx(3.714749).epsilon(1e-6));
}

TEST_CASE("duration fit: inconsistent quantiles")
{
    CHECK_THROWS_AS(fit_duration_distribution(0.5, 11, 0.5, 200), FitError);
    CHECK_THROWS_AS(fit_duration_distribution(0.8, 200, 0.001, 11), FitError);
    CHECK_THROWS_AS(fit_duration_distribution(0.1, 11, 0.95, 200), FitError);
    CHECK_THROWS_AS(fit_duration_distribution(0.8, 11, 0.0, 200), FitError);
}

TEST_CASE("sampled durations hit both quantiles and the median")
{
    const auto m = default_model();
    Rng rng(31);
    const int n = 1000000;
    std::vector<double> d(n);
    int below = 0, above = 0;
    for (auto& v : d) {
        v = sample_data_duration(rng, m);
        below += v < 11.0;
        above += v > 200.0;
    }
    CHECK(std::abs(below / double(n) - 0.8) < 0.005);
    CHECK(std::abs(above / double(n) - 0.001) < 0.0005);
    std::nth_element(d.begin(), d.begin() + n / 2, d.end());
    CHECK(d[n / 2] == doctest::Approx(std::exp(m.lognorm_mu)).epsilon(0.01));
}

TEST_CASE("sampled volumes respect the support and the small-size quantile")
{
    const auto m = default_model();
    Rng rng(32);
    const int n = 1000000;
    int small = 0;
    for (int i = 0; i < n; ++i) {
        const double v = sample_volume(rng, m);
        REQUIRE(v >= m.pareto_xm_bits);
        REQUIRE(v <= m.volume_cap_bits);
        small += v < 10000.0;
    }
    CHECK(std::abs(small / double(n) - 0.8) < 0.01);
}

TEST_CASE("truncated mean: closed form against quadrature and sampling")
{
    const auto m = default_model();
    const double quad = oracle::truncated_pareto_mean(m.pareto_alpha, m.pareto_xm_bits, m.volume_cap_bits);
    CHECK(quad == doctest::Approx(21883.346242).epsilon(1e-6));
    CHECK(truncated_pareto_mean(m.pareto_alpha, m.pareto_xm_bits, m.volume_cap_bits) ==
          doctest::Approx(quad).epsilon(1e-9));
    CHECK(pareto_mean(m.pareto_alpha, m.pareto_xm_bits) == doctest::Approx(47049.06).epsilon(1e-6));

    Rng rng(33);
    const int n = 10000000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        sum += sample_volume(rng, m);
    CHECK(std::abs(sum / n - quad) < 0.1 * quad);
}

TEST_CASE("sample_interarrival")
{
    Rng rng(34);
    double sum = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double t = sample_interarrival(rng, 10.0);
        REQUIRE(t > 0);
        sum += t;
    }
    CHECK(std::abs(sum / 1e6 - 10.0) < 0.05);

    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_interarrival(a, 10.0) == sample_interarrival(b, 10.0));
    CHECK_THROWS_AS(sample_interarrival(a, 0.0), ConfigError);
}

TEST_CASE("sample_session: forced classes")
{
    auto voice = default_model();
    voice.data_fraction = 0.0;
    Rng rng(35);
    double dur = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const auto s = sample_session(rng, voice, 3, 1.5);
        REQUIRE(s.cls == SessionClass::voice);
        REQUIRE(s.rate_bps == 128000.0);
        REQUIRE(s.duration_s > 0);
        dur += s.duration_s;
    }
    CHECK(std::abs(dur / n - 100.0) < 0.5);

    auto data = default_model();
    data.data_fraction = 1.0;
    for (int i = 0; i < 100000; ++i) {
        const auto s = sample_session(rng, data, 3, 1.5);
        REQUIRE(s.cls == SessionClass::data);
        REQUIRE(s.cell_id == 3);
        REQUIRE(s.start_s == 1.5);
        REQUIRE(std::isfinite(s.rate_bps));
        REQUIRE(s.rate_bps > 0);
        const double v = s.volume_bits();
        REQUIRE(v >= data.pareto_xm_bits * (1 - 1e-12));
        REQUIRE(v <= data.volume_cap_bits * (1 + 1e-12));
    }
}

TEST_CASE("sample_session: class mix follows data_fraction")
{
    const auto m = default_model();
    Rng rng(36);
    int data = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        data += sample_session(rng, m, 0, 0).cls == SessionClass::data;
    CHECK(std::abs(data / double(n) - 0.97) < 0.003);
}

TEST_CASE("generate_cell_sessions")
{
    const auto m = default_model();
    Rng rng(37);
    double total = 0;
    for (int cell = 0; cell < 1000; ++cell) {
        const auto s = generate_cell_sessions(rng, m, cell, 3600);
        total += static_cast<double>(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            REQUIRE(s[i].start_s >= 0);
            REQUIRE(s[i].start_s < 3600);
            REQUIRE(s[i].cell_id == cell);
            if (i)
                REQUIRE(s[i - 1].start_s <= s[i].start_s);
        }
    }
    CHECK(std::abs(total / 1000 - 360) < 2);

    Rng early(38);
    CHECK(generate_cell_sessions(early, m, 0, 1e-9).empty());
    CHECK_THROWS_AS(generate_cell_sessions(early, m, 0, 0.0), ConfigError);
}

TEST_CASE("long-run offered rate per cell")
{
    const auto m = default_model();
    CHECK(offered_rate_per_cell(m) == doctest::Approx(40522.684586).epsilon(1e-6));

    // 16 independent cells, 1e5 s each
    double bits = 0;
    for (int cell = 0; cell < 16; ++cell) {
        Rng rng(derive_seed(77, static_cast<std::uint64_t>(cell)));
        for (const auto& s : generate_cell_sessions(rng, m, cell, 1e5))
            bits += s.volume_bits();
    }
    const double rate = bits / (16 * 1e5);
    CHECK(std::abs(rate / offered_rate_per_cell(m) - 1) < 0.15);
}

TEST_CASE("kilobyte reading scales the size threshold")
{
    SimulationConfig cfg;
    cfg.size_unit = SizeUnit::kilobyte;
    const auto m = fit_traffic_model(cfg);
    CHECK(m.pareto_xm_bits == doctest::Approx(8 * default_model().pareto_xm_bits));
}
