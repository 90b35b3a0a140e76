#pragma once

#include <cstdint>
#include <vector>

#include "gridmc/geometry.hpp"
#include "gridmc/tuning.hpp"

namespace gridmc {

// Travel direction along the road axis (y). Right-side traffic moves +y in
// the high-numbered lanes, left-side traffic -y in the low-numbered lanes.
enum class Side { left, right };

inline constexpr double kDefaultSpeedMps = 50.0 / 3.6; // 50 km/h

struct Vehicle {
    int id = 0;
    Vec2 position{};
    Vec2 velocity{};
    Side side = Side::right;
    InterfaceTuning tuning{};
};

// Places ceil(n/2) right-side vehicles (ids 0..) then floor(n/2) left-side
// ones. Lane and longitudinal offset are drawn uniformly from a stream
// seeded only by (seed, id), so placements are identical across schemes.
std::vector<Vehicle> spawn_scenario(int n, const GridMap& grid,
                                    std::uint64_t seed,
                                    double speed_mps = kDefaultSpeedMps);

// Advances position by dt seconds; y wraps around the segment length
// (vehicles leaving one end re-enter at the other), x is left as-is.
void advance(Vehicle& v, double dt, const GridMap& grid);

// Position after t seconds of straight-line motion from v.position,
// with the same wrap rule as advance(). Does not mutate v.
Vec2 position_at(const Vehicle& v, double t, const GridMap& grid);

// Cell the vehicle enters next given its heading: rows wrap (the road is a
// ring in y), columns clamp at the outer lanes. Zero velocity returns the
// current cell.
GridCoord predict_cell(const Vehicle& v, const GridMap& grid);

} // namespace gridmc
