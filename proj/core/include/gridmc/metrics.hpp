#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gridmc/channels.hpp"

namespace gridmc {

// Per-run accounting. Windowed quantities cover [warmup, duration] only;
// the conservation counters and relay totals cover the whole run.
struct MetricsLedger {
    double window_s = 0.0; // measured span (duration - warmup)

    // delivery delay samples in seconds, creation -> first decode,
    // for frames created inside the window
    std::vector<double> delay_samples;        // nonsafety unicast
    std::vector<double> safety_delay_samples; // CCH safety broadcasts

    std::int64_t delivered_payload_bits = 0;      // nonsafety, in-window
    std::vector<std::int64_t> per_node_delivered; // nonsafety per source

    // busy-union seconds per channel (dense 7-channel index), in-window
    std::array<double, kNumChannels> busy_seconds{};
    // transmission starts per channel, whole run
    std::array<std::int64_t, kNumChannels> access_counts{};

    // whole-run frame conservation
    std::int64_t generated = 0;
    std::int64_t delivered = 0;
    std::int64_t drops_collision = 0;
    std::int64_t drops_switch = 0;
    std::int64_t drops_retry = 0;
    std::int64_t drops_ttl = 0;
    std::int64_t drops_no_receiver = 0;
    std::int64_t in_flight_at_end = 0;

    // dual-SCH (relay-capable) exposure, whole run
    double tz_relay_seconds = 0.0;
    std::int64_t tz_relay_entries = 0;

    bool conservation_holds() const {
        return generated == delivered + drops_collision + drops_switch +
                                drops_retry + drops_ttl + drops_no_receiver +
                                in_flight_at_end;
    }
};

// Delay statistics over the nonsafety samples; both throw std::domain_error
// when no frame was delivered in the window.
double mean_delay(const MetricsLedger& m);
double p95_delay(const MetricsLedger& m); // nearest-rank percentile

double throughput_bps(const MetricsLedger& m); // nonsafety bits / window
double channel_utilization(const MetricsLedger& m, ChannelId ch);
double mean_sch_utilization(const MetricsLedger& m);

// Jain fairness (sum x)^2 / (n * sum x^2); 1 when all-equal, -> 1/n when
// one node dominates. Throws std::domain_error for empty or all-zero input.
double jain_index(std::span<const std::int64_t> per_node);
double jain_index(const MetricsLedger& m);

struct RelayOpportunities {
    double seconds = 0.0;
    std::int64_t entries = 0;
};
RelayOpportunities tz_relay_opportunities(const MetricsLedger& m);

} // namespace gridmc
