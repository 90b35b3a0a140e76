#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gridmc/geometry.hpp"
#include "gridmc/mac.hpp"
#include "gridmc/metrics.hpp"
#include "gridmc/mobility.hpp"
#include "gridmc/plan.hpp"

namespace gridmc {

enum class Scheme { grid, dcf_baseline };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::grid ? "grid" : "dcf_baseline";
}

struct World {
    Scheme scheme = Scheme::grid;
    GridMap grid;
    ChannelPlan plan; // ignored by the baseline scheme
    std::vector<Vehicle> vehicles;
    MacParams mac{};
    TrafficParams traffic{};
    SimKnobs knobs{};
};

// Runs the discrete-event simulation for duration_s seconds. All randomness
// derives from seed; identical (world, duration, seed) runs byte-identical.
// When trace is non-null, one line per processed event is written as
// "time kind node channel frame_id outcome".
// Throws std::invalid_argument for bad setup, std::logic_error if internal
// invariants (event ordering, frame conservation) break.
MetricsLedger run(const World& world, double duration_s, std::uint64_t seed,
                  std::ostream* trace = nullptr);

} // namespace gridmc
