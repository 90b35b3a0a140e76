#pragma once

#include <array>
#include <limits>

#include "gridmc/channels.hpp"
#include "gridmc/sim_time.hpp"

namespace gridmc {

// W2 may tune the CCH or any SCH; W3 tunes SCHs only. I_1 is fixed W3 and
// I_2 fixed W2 in every OBU.
enum class InterfaceMode { w2, w3 };

inline constexpr SimTime kNeverRetuning = std::numeric_limits<SimTime>::min();

struct IfaceTuning {
    ChannelId channel;
    // The interface neither transmits nor receives while now < retuning_until.
    SimTime retuning_until = kNeverRetuning;

    bool retuning(SimTime now) const { return now < retuning_until; }
};

struct InterfaceTuning {
    IfaceTuning i1; // W3: SCH only
    IfaceTuning i2; // W2: CCH or SCH

    // The relay-opportunity condition: two distinct SCHs held at once.
    bool holds_two_sch() const {
        return i1.channel.is_sch() && i2.channel.is_sch() &&
               i1.channel != i2.channel;
    }
};

// Baseline scanner state: measured busy fractions per SCH (indexed as
// sch_channels()), current dwell position, and time left in the dwell.
struct ScanState {
    std::array<double, kNumSch> busy_fraction{};
    std::array<bool, kNumSch> measured{};
    int scan_position = kNumSch; // 0..5 while sweeping, kNumSch once parked
    double dwell_remaining = 0.0;

    bool scanning() const { return scan_position < kNumSch; }
    bool all_measured() const {
        for (bool m : measured)
            if (!m) return false;
        return true;
    }
};

} // namespace gridmc
