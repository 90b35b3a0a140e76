#include "gridmc/radio.hpp"

#include <stdexcept>

namespace gridmc {

namespace {

void retag(IfaceTuning& iface, ChannelId target, SimTime now,
           SimTime switch_latency) {
    if (iface.channel == target) return;
    iface.channel = target;
    iface.retuning_until = now + switch_latency;
}

} // namespace

ChannelId least_congested(const ScanState& scan) {
    if (!scan.all_measured())
        throw std::logic_error("least_congested: scan sweep incomplete");
    int best = 0;
    for (int i = 1; i < kNumSch; ++i)
        if (scan.busy_fraction[i] < scan.busy_fraction[best]) best = i;
    return sch_channels()[best];
}

InterfaceTuning grid_tuning(const Vehicle& v, const GridMap& grid,
                            const ChannelPlan& plan, SimTime now,
                            SimTime switch_latency) {
    const GridCoord cell = grid.locate(v.position);
    const TzStatus tz = grid.transition_state(v.position, v.velocity);

    const ChannelId own = channel_of(plan, cell);
    const ChannelId ahead =
        tz.in_tz ? channel_of(plan, tz.next_cell) : plan.cch;

    InterfaceTuning t = v.tuning;
    retag(t.i1, own, now, switch_latency);
    retag(t.i2, ahead, now, switch_latency);
    return t;
}

InterfaceTuning baseline_tuning(const Vehicle& v, const ScanState& scan,
                                SimTime now, SimTime switch_latency) {
    InterfaceTuning t = v.tuning;
    retag(t.i2, kCch, now, switch_latency);
    const ChannelId park = scan.scanning()
                               ? sch_channels()[scan.scan_position]
                               : least_congested(scan);
    retag(t.i1, park, now, switch_latency);
    return t;
}

} // namespace gridmc
