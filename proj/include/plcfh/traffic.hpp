#pragma once

#include <vector>

#include "plcfh/config.hpp"
#include "plcfh/random.hpp"

namespace plcfh {

/// Pareto law for data-session volumes.
struct SizeFit {
    double alpha = 0.0;
    double xm_bits = 0.0;
};

/// Lognormal law for data-session durations (natural-log space, seconds).
struct DurationFit {
    double mu = 0.0;
    double sigma = 0.0;
};

/// Pareto parameters meeting two constraints: a fraction `p_small` of the
/// volumes lies below `small_bits`, and the largest `top_q` fraction of
/// the volumes carries `top_share` of the total. The second constraint is
/// the Pareto Lorenz property top_q^(1 - 1/alpha) = top_share.
SizeFit fit_size_distribution(double p_small = 0.8, double small_bits = 10000.0, double top_q = 0.1,
                              double top_share = 0.9);

/// Lognormal parameters putting `p_short` of the mass below `short_s` and
/// `p_long` above `long_s`.
DurationFit fit_duration_distribution(double p_short = 0.8, double short_s = 11.0, double p_long = 0.001,
                                      double long_s = 200.0);

struct TrafficModel {
    double data_fraction = 0.97;
    double pareto_alpha = 0.0;
    double pareto_xm_bits = 0.0;
    double lognorm_mu = 0.0;
    double lognorm_sigma = 0.0;
    double voice_rate_bps = 128000.0;
    double voice_mean_duration_s = 100.0;
    double mean_interarrival_s = 10.0;
    double volume_cap_bits = 1e9;

    void validate() const;
};

/// Fit both data laws to the measured profile and copy the remaining
/// parameters from the configuration. Volume thresholds are scaled by the
/// configured size unit.
TrafficModel fit_traffic_model(const SimulationConfig& cfg);

enum class SessionClass { voice, data };

struct Session {
    int cell_id = 0;
    SessionClass cls = SessionClass::data;
    double start_s = 0.0;
    double duration_s = 0.0;
    double rate_bps = 0.0; ///< constant over the session

    double volume_bits() const { return rate_bps * duration_s; }
    double end_s() const { return start_s + duration_s; }

    bool operator==(const Session&) const = default;
};

double sample_interarrival(Rng& rng, double mean_s);

/// Pareto volume conditioned on V <= volume_cap_bits.
double sample_volume(Rng& rng, const TrafficModel& model);

double sample_data_duration(Rng& rng, const TrafficModel& model);

Session sample_session(Rng& rng, const TrafficModel& model, int cell_id, double start_s);

/// Poisson arrivals on [0, horizon_s), sorted by start time. Sessions may
/// run past the horizon.
std::vector<Session> generate_cell_sessions(Rng& rng, const TrafficModel& model, int cell_id, double horizon_s);

/// alpha * xm / (alpha - 1).
double pareto_mean(double alpha, double xm);

/// E[V | V <= cap] for a Pareto(alpha, xm) volume.
double truncated_pareto_mean(double alpha, double xm, double cap);

/// Long-run mean rate offered by one cell, in bits/s.
double offered_rate_per_cell(const TrafficModel& model);

} // namespace plcfh
