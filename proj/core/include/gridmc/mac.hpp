#pragma once

#include <cstdint>
#include <stdexcept>

#include "gridmc/channels.hpp"
#include "gridmc/sim_time.hpp"

namespace gridmc {

inline constexpr int kBroadcastDst = -1;

enum class FrameKind { safety, nonsafety, bootstrap };

inline const char* frame_kind_name(FrameKind k) {
    switch (k) {
        case FrameKind::safety: return "safety";
        case FrameKind::nonsafety: return "nonsafety";
        case FrameKind::bootstrap: return "bootstrap";
    }
    return "?";
}

struct Frame {
    std::int64_t id = 0;
    FrameKind kind = FrameKind::nonsafety;
    int src = 0;
    int dst = kBroadcastDst;
    std::int64_t payload_bits = 0;
    SimTime created_at = 0;
    SimTime expires_at = kSimTimeMax; // nonsafety only; others never expire
    ChannelId channel;                // stamped when contention starts
    int attempts = 0;                 // completed transmissions so far
};

// 802.11a OFDM-style DCF timing. Every access waits DIFS plus a fresh
// uniform backoff in [0, CW] slots, even on an idle medium; the counter
// freezes while the medium is busy. CW_k = min((cw_min+1)*2^k - 1, cw_max).
struct MacParams {
    double slot_s = 13e-6;
    double sifs_s = 32e-6;
    double difs_s = 58e-6;
    int cw_min = 15;
    int cw_max = 1023;
    double data_rate_bps = 6e6;
    double phy_overhead_s = 48e-6; // preamble + header airtime per frame
    int max_retries = 4;           // unicast; broadcast never retries
    double tx_range_m = 55.0;      // decode and carrier-sense radius
    double switch_latency_s = 2e-3;

    void validate() const {
        if (slot_s <= 0 || sifs_s <= 0 || data_rate_bps <= 0)
            throw std::invalid_argument("MacParams: timings must be positive");
        if (difs_s <= sifs_s)
            throw std::invalid_argument("MacParams: DIFS must exceed SIFS");
        if (cw_min < 0 || cw_max < cw_min)
            throw std::invalid_argument("MacParams: need 0 <= cw_min <= cw_max");
        if (max_retries < 0)
            throw std::invalid_argument("MacParams: negative max_retries");
        if (tx_range_m <= 0)
            throw std::invalid_argument("MacParams: tx_range must be positive");
        if (switch_latency_s < 0 || phy_overhead_s < 0)
            throw std::invalid_argument("MacParams: negative latency");
    }

    int contention_window(int attempts) const {
        long cw = cw_min;
        for (int i = 0; i < attempts; ++i) {
            cw = (cw + 1) * 2 - 1;
            if (cw >= cw_max) return cw_max;
        }
        return static_cast<int>(cw < cw_max ? cw : cw_max);
    }

    SimTime airtime(std::int64_t payload_bits) const {
        return from_seconds(phy_overhead_s) +
               static_cast<SimTime>(static_cast<double>(payload_bits) *
                                    1e9 / data_rate_bps);
    }
};

struct TrafficParams {
    double safety_hz = 10.0;            // periodic CCH broadcasts
    std::int64_t safety_payload_bits = 800;
    double nonsafety_rate_hz = 120.0;   // Poisson unicast arrivals per node
    std::int64_t nonsafety_payload_bits = 4000; // 500 B
    double nonsafety_ttl_s = 1.0;       // queue lifetime before drop

    void validate() const {
        if (safety_hz < 0 || nonsafety_rate_hz < 0)
            throw std::invalid_argument("TrafficParams: negative rate");
        if (safety_payload_bits <= 0 || nonsafety_payload_bits <= 0)
            throw std::invalid_argument("TrafficParams: payload must be positive");
        if (nonsafety_ttl_s <= 0)
            throw std::invalid_argument("TrafficParams: ttl must be positive");
    }
};

// Engine scheduling knobs shared by both schemes.
struct SimKnobs {
    double mobility_step_s = 0.01; // tuning/TTL/relay bookkeeping cadence
    double warmup_s = 5.0;         // excluded from windowed metrics

    // grid scheme
    bool rsu_enabled = true;        // roadside unit broadcasting cell plans
    double rsu_period_s = 0.1;
    std::int64_t rsu_payload_bits = 800;
    bool start_configured = true;   // vehicles already hold the plan at t=0

    // baseline scheme
    double dwell_s = 0.02; // per-SCH listen time during a scan sweep
    double epoch_s = 2.0;  // time between scan sweeps (per-node staggered)

    void validate() const {
        if (mobility_step_s <= 0)
            throw std::invalid_argument("SimKnobs: mobility step must be positive");
        if (warmup_s < 0)
            throw std::invalid_argument("SimKnobs: negative warmup");
        if (rsu_period_s <= 0 || rsu_payload_bits <= 0)
            throw std::invalid_argument("SimKnobs: bad rsu settings");
        if (dwell_s < 0 || epoch_s <= 0)
            throw std::invalid_argument("SimKnobs: bad scan settings");
        if (6.0 * dwell_s > epoch_s)
            throw std::invalid_argument("SimKnobs: sweep longer than epoch");
    }
};

} // namespace gridmc
