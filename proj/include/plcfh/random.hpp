#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace plcfh {

// splitmix64 finalizer. Used to derive independent stream seeds from a
// master seed and a tuple of counters.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// derive_seed(s, a, b, c) = mix(mix(mix(s ^ mix(a)) ^ mix(b)) ^ mix(c)).
// Positional: the result depends only on the counters, never on how many
// streams were derived before.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) noexcept
{
    return mix64(master ^ mix64(a));
}

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, Rest... rest) noexcept
{
    return derive_seed(derive_seed(master, a), static_cast<std::uint64_t>(rest)...);
}

// Thin wrapper over mt19937_64 with hand-written variate transforms, so that
// sequences are identical across standard library implementations (the
// <random> distributions are not specified bit-for-bit).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double mean) { return -mean * std::log(uniform_open0()); }

    // Box-Muller, one variate per call.
    double standard_normal()
    {
        const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        return r * std::cos(theta);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace plcfh
