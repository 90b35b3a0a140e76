#pragma once

#include <cmath>
#include <cstdint>

namespace gridmc {

// Simulation clock in integer nanoseconds. Event ordering and all MAC
// timing arithmetic stay exact; seconds appear only at the config and
// reporting boundaries.
using SimTime = std::int64_t;

inline constexpr SimTime kNanosPerSecond = 1'000'000'000;
inline constexpr SimTime kSimTimeMax = INT64_MAX;

inline SimTime from_seconds(double s) {
    return static_cast<SimTime>(std::llround(s * 1e9));
}

inline constexpr double to_seconds(SimTime t) {
    return static_cast<double>(t) * 1e-9;
}

inline constexpr SimTime from_micros(std::int64_t us) { return us * 1000; }

} // namespace gridmc
