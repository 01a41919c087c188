#pragma once

#include <cstdint>
#include <random>

namespace ccgym {

// Simulation clock: integer nanoseconds since run start.
using SimTime = std::uint64_t;

constexpr SimTime kMicrosecond = 1'000;
constexpr SimTime kMillisecond = 1'000'000;
constexpr SimTime kSecond = 1'000'000'000;

// Serialization timing with an exact remainder carry. Durations are
// bits * 1e9 / rate_bps floored to whole nanoseconds; the division remainder
// is carried into the next call so long-run throughput equals the rate with
// no cumulative rounding drift.
struct RateCarry {
    std::uint64_t rem = 0;

    SimTime advance(std::uint64_t bits, std::uint64_t rate_bps) {
        unsigned __int128 num = (unsigned __int128)bits * 1'000'000'000ull + rem;
        SimTime d = static_cast<SimTime>(num / rate_bps);
        rem = static_cast<std::uint64_t>(num % rate_bps);
        return d;
    }
};

// One-shot serialization delay, rounded up.
inline SimTime serialization_ns_ceil(std::uint64_t bits, std::uint64_t rate_bps) {
    unsigned __int128 num = (unsigned __int128)bits * 1'000'000'000ull;
    return static_cast<SimTime>((num + rate_bps - 1) / rate_bps);
}

// Uniform double in [0,1) from the generator's top 53 bits. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace ccgym
