#include "plcfh/traffic.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "plcfh/error.hpp"

namespace plcfh {

namespace {

// Shares this close to top_q send alpha to infinity.
constexpr double max_alpha = 1e6;

double normal_quantile(double p)
{
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

} // namespace

SizeFit fit_size_distribution(double p_small, double small_bits, double top_q, double top_share)
{
    if (!(p_small > 0 && p_small < 1))
        throw FitError("size fit: p_small must lie in (0, 1)");
    if (!(small_bits > 0))
        throw FitError("size fit: small_bits must be > 0");
    if (!(top_q > 0 && top_q < 1) || !(top_share > 0 && top_share < 1))
        throw FitError("size fit: top_q and top_share must lie in (0, 1)");
    if (!(top_share > top_q))
        throw FitError("size fit: top_share must exceed top_q for a finite-mean Pareto");

    // top_q^(1 - 1/alpha) = top_share  <=>  1 - 1/alpha = ln(top_share) / ln(top_q)
    const double exponent = std::log(top_share) / std::log(top_q);
    const double alpha = 1.0 / (1.0 - exponent);
    if (!(alpha > 1.0) || !(alpha < max_alpha))
        throw FitError("size fit: no Pareto exponent in (1, 1e6) meets the share constraint");

    // P(V < small) = 1 - (xm / small)^alpha = p_small
    const double xm = small_bits * std::pow(1.0 - p_small, 1.0 / alpha);
    return {alpha, xm};
}

DurationFit fit_duration_distribution(double p_short, double short_s, double p_long, double long_s)
{
    if (!(short_s > 0) || !(long_s > short_s))
        throw FitError("duration fit: need 0 < short_s < long_s");
    if (!(p_short > 0 && p_long > 0) || !(p_short + p_long < 1))
        throw FitError("duration fit: need p_short, p_long > 0 and p_short + p_long < 1");
    const double z_short = normal_quantile(p_short);
    const double z_long = normal_quantile(1.0 - p_long);
    const double sigma = (std::log(long_s) - std::log(short_s)) / (z_long - z_short);
    if (!(sigma > 0) || !std::isfinite(sigma))
        throw FitError("duration fit: quantiles are inconsistent (sigma <= 0)");
    return {std::log(short_s) - z_short * sigma, sigma};
}

void TrafficModel::validate() const
{
    if (!(data_fraction >= 0 && data_fraction <= 1))
        throw ConfigError("traffic: data_fraction must lie in [0, 1]");
    if (!(pareto_alpha > 1) || !(pareto_xm_bits > 0))
        throw ConfigError("traffic: need pareto_alpha > 1 and pareto_xm_bits > 0");
    if (!(lognorm_sigma > 0) || !std::isfinite(lognorm_mu))
        throw ConfigError("traffic: need lognorm_sigma > 0");
    if (!(voice_rate_bps > 0) || !(voice_mean_duration_s > 0) || !(mean_interarrival_s > 0))
        throw ConfigError("traffic: rates and durations must be positive");
    if (!(volume_cap_bits > pareto_xm_bits))
        throw ConfigError("traffic: volume_cap_bits must exceed pareto_xm_bits");
}

TrafficModel fit_traffic_model(const SimulationConfig& cfg)
{
    const double kb = cfg.size_unit == SizeUnit::kilobit ? 1000.0 : 8000.0;
    const auto size = fit_size_distribution(0.8, 10.0 * kb, 0.1, 0.9);
    const auto dur = fit_duration_distribution(0.8, 11.0, 0.001, 200.0);

    TrafficModel m;
    m.data_fraction = cfg.data_fraction;
    m.pareto_alpha = size.alpha;
    m.pareto_xm_bits = size.xm_bits;
    m.lognorm_mu = dur.mu;
    m.lognorm_sigma = dur.sigma;
    m.voice_rate_bps = cfg.voice_rate_bps;
    m.voice_mean_duration_s = cfg.voice_mean_duration_s;
    m.mean_interarrival_s = cfg.mean_interarrival_s;
    m.volume_cap_bits = cfg.volume_cap_bits;
    m.validate();
    return m;
}

double sample_interarrival(Rng& rng, double mean_s)
{
    if (!(mean_s > 0))
        throw ConfigError("mean inter-arrival must be > 0");
    double t;
    do {
        t = rng.exponential(mean_s);
    } while (!(t > 0));
    return t;
}

double sample_volume(Rng& rng, const TrafficModel& model)
{
    const double a = model.pareto_alpha;
    const double xm = model.pareto_xm_bits;
    // inverse CDF of the Pareto law restricted to [xm, cap]
    const double mass_below_cap = -std::expm1(a * std::log(xm / model.volume_cap_bits));
    const double v = xm * std::pow(1.0 - rng.uniform() * mass_below_cap, -1.0 / a);
    return std::clamp(v, xm, model.volume_cap_bits);
}

double sample_data_duration(Rng& rng, const TrafficModel& model)
{
    return std::exp(model.lognorm_mu + model.lognorm_sigma * rng.standard_normal());
}

Session sample_session(Rng& rng, const TrafficModel& model, int cell_id, double start_s)
{
    Session s;
    s.cell_id = cell_id;
    s.start_s = start_s;
    if (rng.bernoulli(model.data_fraction)) {
        s.cls = SessionClass::data;
        const double volume = sample_volume(rng, model);
        s.duration_s = sample_data_duration(rng, model);
        s.rate_bps = volume / s.duration_s;
    } else {
        s.cls = SessionClass::voice;
        s.duration_s = sample_interarrival(rng, model.voice_mean_duration_s);
        s.rate_bps = model.voice_rate_bps;
    }
    return s;
}

std::vector<Session> generate_cell_sessions(Rng& rng, const TrafficModel& model, int cell_id, double horizon_s)
{
    if (!(horizon_s > 0))
        throw ConfigError("horizon_s must be > 0");
    std::vector<Session> out;
    out.reserve(static_cast<std::size_t>(horizon_s / model.mean_interarrival_s * 1.2) + 4);
    double t = sample_interarrival(rng, model.mean_interarrival_s);
    while (t < horizon_s) {
        out.push_back(sample_session(rng, model, cell_id, t));
        t += sample_interarrival(rng, model.mean_interarrival_s);
    }
    return out;
}

double pareto_mean(double alpha, double xm)
{
    return alpha * xm / (alpha - 1.0);
}

double truncated_pareto_mean(double alpha, double xm, double cap)
{
    const double r = xm / cap;
    // (1 - r^(alpha-1)) / (1 - r^alpha), written to stay accurate near alpha = 1
    const double num = -std::expm1((alpha - 1.0) * std::log(r));
    const double den = -std::expm1(alpha * std::log(r));
    return pareto_mean(alpha, xm) * num / den;
}

double offered_rate_per_cell(const TrafficModel& model)
{
    const double data_bits = truncated_pareto_mean(model.pareto_alpha, model.pareto_xm_bits, model.volume_cap_bits);
    const double voice_bits = model.voice_rate_bps * model.voice_mean_duration_s;
    return (model.data_fraction * data_bits + (1.0 - model.data_fraction) * voice_bits) / model.mean_interarrival_s;
}

} // namespace plcfh
