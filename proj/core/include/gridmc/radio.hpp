#pragma once

#include "gridmc/geometry.hpp"
#include "gridmc/mobility.hpp"
#include "gridmc/plan.hpp"
#include "gridmc/tuning.hpp"

namespace gridmc {

// Lowest-busy SCH from a completed scan sweep; ties break toward the lower
// channel number. Throws std::logic_error if any SCH is still unmeasured.
ChannelId least_congested(const ScanState& scan);

// Grid-scheme tuning for one vehicle:
//   I_1 -> SCH of the current cell;
//   I_2 -> CCH normally, or the SCH of the next cell while the vehicle is
//          inside the transition zone.
// A changed channel (relative to v.tuning) is stamped deaf until
// now + switch_latency; unchanged interfaces keep their previous stamp.
InterfaceTuning grid_tuning(const Vehicle& v, const GridMap& grid,
                            const ChannelPlan& plan, SimTime now,
                            SimTime switch_latency);

// Baseline tuning: I_2 stays on the CCH; I_1 follows the scan sweep while
// scanning and otherwise parks on the least congested SCH. Same stamping
// rule as grid_tuning.
InterfaceTuning baseline_tuning(const Vehicle& v, const ScanState& scan,
                                SimTime now, SimTime switch_latency);

} // namespace gridmc
