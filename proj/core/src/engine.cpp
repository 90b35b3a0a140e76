#include "gridmc/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gridmc/radio.hpp"
#include "gridmc/rng.hpp"

namespace gridmc {

namespace {

// sub-seed stream tags (arbitrary odd constants)
constexpr std::uint64_t kStreamTraffic = 0x7452414646433101ULL;
constexpr std::uint64_t kStreamMac = 0x4d41432d52532d01ULL;
constexpr std::uint64_t kStreamScan = 0x5343414e2d532d01ULL;

enum class EventKind {
    traffic_arrival,
    backoff_expiry,
    tx_start,
    tx_end,
    scan_step,
    retune_check,
    metrics_sample,
};

const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::traffic_arrival: return "traffic_arrival";
        case EventKind::backoff_expiry: return "backoff_expiry";
        case EventKind::tx_start: return "tx_start";
        case EventKind::tx_end: return "tx_end";
        case EventKind::scan_step: return "scan_step";
        case EventKind::retune_check: return "retune_check";
        case EventKind::metrics_sample: return "metrics_sample";
    }
    return "?";
}

struct Event {
    SimTime time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::retune_check;
    int node = -1;
    int iface = -1;
    int aux = 0;
    std::uint64_t gen = 0;
    int handle = -1;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
    }
};

enum class CState { idle, waiting, frozen, committed };

struct Iface {
    bool enabled = true;
    ChannelId channel;
    SimTime retuning_until = kNeverRetuning;
    bool transmitting = false;

    // contention
    CState cstate = CState::idle;
    Frame frame{};
    bool has_frame = false;
    int remaining_slots = 0;
    SimTime idle_since = 0;
    std::uint64_t gen = 0;

    // carrier sense: number of in-range transmissions on this channel
    int busy_count = 0;
    SimTime busy_since = 0;
    double busy_integral_s = 0.0;

    // in-progress receptions (handles into the active-tx table)
    std::vector<int> rx_handles;

    bool retuning(SimTime now) const { return now < retuning_until; }
};

struct NodeState {
    Vehicle veh{};
    bool is_rsu = false;
    bool configured = true;
    std::array<Iface, 2> ifaces{}; // [0] = I_1 (W3, SCH), [1] = I_2 (W2)

    std::deque<Frame> cch_q; // safety + bootstrap broadcasts
    std::deque<Frame> sch_q; // nonsafety unicast

    Rng traffic_rng{0};

    // baseline scan
    ScanState scan{};
    SimTime sweep_start = 0;
    double dwell_mark_s = 0.0;

    // dual-SCH (relay) bookkeeping
    bool dual_sch = false;
    SimTime dual_since = 0;
};

struct ActiveTx {
    bool alive = false;
    Frame frame{};
    int src = -1;
    int src_iface = -1;
    Vec2 src_pos{};
    ChannelId ch;
    SimTime start = 0;
    SimTime end = 0;

    struct Rx {
        int node;
        int iface;
        bool corrupted = false;
        bool aborted = false;
    };
    std::vector<Rx> rxs;
    std::vector<std::pair<int, int>> sensors;
    bool deaf_in_range = false;
};

struct ChannelBusy {
    int count = 0;
    SimTime since = 0;
    double integral_s = 0.0;
    double window_mark_s = 0.0;
};

class Engine {
  public:
    Engine(const World& world, double duration_s, std::uint64_t seed,
           std::ostream* trace)
        : world_(world), seed_(seed), trace_(trace) {
        if (duration_s <= 0.0)
            throw std::invalid_argument("run: duration must be positive");
        world_.mac.validate();
        world_.traffic.validate();
        world_.knobs.validate();
        end_ = from_seconds(duration_s);
        warmup_ = from_seconds(world_.knobs.warmup_s);
        if (warmup_ >= end_)
            throw std::invalid_argument("run: warmup must be shorter than duration");
        if (world_.scheme == Scheme::grid) {
            if (world_.plan.rows != world_.grid.rows() ||
                world_.plan.cols != world_.grid.cols())
                throw std::invalid_argument("run: plan does not cover the grid");
        }
        slot_ = from_seconds(world_.mac.slot_s);
        difs_ = from_seconds(world_.mac.difs_s);
        switch_latency_ = from_seconds(world_.mac.switch_latency_s);
        mob_step_ = from_seconds(world_.knobs.mobility_step_s);
        mac_rng_ = Rng(mix_seed(seed_, kStreamMac));
    }

    MetricsLedger run_all() {
        init_nodes();
        schedule(0, {.kind = EventKind::retune_check});
        schedule(warmup_, {.kind = EventKind::metrics_sample});
        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.time > end_) break;
            queue_.pop();
            if (ev.time < now_)
                throw std::logic_error("event queue went backwards");
            now_ = ev.time;
            dispatch(ev);
        }
        finalize();
        return std::move(ledger_);
    }

  private:
    World world_;
    std::uint64_t seed_;
    std::ostream* trace_;

    SimTime end_ = 0;
    SimTime warmup_ = 0;
    SimTime slot_ = 0;
    SimTime difs_ = 0;
    SimTime switch_latency_ = 0;
    SimTime mob_step_ = 0;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;

    std::vector<NodeState> nodes_;
    int n_vehicles_ = 0;
    std::vector<ActiveTx> txs_;
    std::vector<int> free_tx_;
    std::array<ChannelBusy, kNumChannels> chan_busy_{};
    MetricsLedger ledger_;
    Rng mac_rng_{0};
    std::int64_t next_frame_id_ = 0;

    const GridMap& grid() const { return world_.grid; }
    const MacParams& mac() const { return world_.mac; }
    const SimKnobs& knobs() const { return world_.knobs; }

    // --- plumbing ---------------------------------------------------------

    void schedule(SimTime t, Event ev) {
        if (t < now_)
            throw std::logic_error("schedule: event in the past");
        ev.time = t;
        ev.seq = next_seq_++;
        queue_.push(ev);
    }

    void trace(EventKind kind, int node, ChannelId ch, std::int64_t frame_id,
               const char* outcome) {
        if (!trace_) return;
        char buf[160];
        char chan[8] = "-";
        if (ch.valid()) std::snprintf(chan, sizeof(chan), "%d", ch.number());
        char fid[24] = "-";
        if (frame_id >= 0)
            std::snprintf(fid, sizeof(fid), "%lld",
                          static_cast<long long>(frame_id));
        std::snprintf(buf, sizeof(buf), "%.9f %s %d %s %s %s\n",
                      to_seconds(now_), event_name(kind), node, chan, fid,
                      outcome ? outcome : "-");
        *trace_ << buf;
    }

    Vec2 node_pos(int node) const {
        return position_at(nodes_[node].veh, to_seconds(now_), grid());
    }

    double torus_dist(Vec2 a, Vec2 b) const {
        const double dx = a.x - b.x;
        double dy = std::abs(a.y - b.y);
        dy = std::min(dy, grid().height() - dy);
        return std::sqrt(dx * dx + dy * dy);
    }

    double iface_busy_now(const Iface& f) const {
        return f.busy_integral_s +
               (f.busy_count > 0 ? to_seconds(now_ - f.busy_since) : 0.0);
    }

    // --- carrier sense & channel occupancy ---------------------------------

    void iface_busy_inc(int node, int ifc) {
        Iface& f = nodes_[node].ifaces[ifc];
        if (f.busy_count++ == 0) {
            f.busy_since = now_;
            on_busy_onset(f);
        }
    }

    void iface_busy_dec(int node, int ifc) {
        Iface& f = nodes_[node].ifaces[ifc];
        if (--f.busy_count < 0)
            throw std::logic_error("carrier-sense count underflow");
        if (f.busy_count == 0) {
            f.busy_integral_s += to_seconds(now_ - f.busy_since);
            on_busy_release(node, ifc);
        }
    }

    void on_busy_onset(Iface& f) {
        if (f.cstate != CState::waiting) return;
        const SimTime elapsed = now_ - f.idle_since;
        long consumed = 0;
        if (elapsed > difs_)
            consumed = static_cast<long>((elapsed - difs_) / slot_);
        f.remaining_slots -=
            static_cast<int>(std::min<long>(consumed, f.remaining_slots));
        f.cstate = CState::frozen;
        ++f.gen; // invalidate the pending expiry
    }

    void on_busy_release(int node, int ifc) {
        Iface& f = nodes_[node].ifaces[ifc];
        if (f.cstate != CState::frozen) return;
        arm_backoff(node, ifc);
    }

    void arm_backoff(int node, int ifc) {
        Iface& f = nodes_[node].ifaces[ifc];
        f.idle_since = now_;
        f.cstate = CState::waiting;
        ++f.gen;
        schedule(now_ + difs_ + static_cast<SimTime>(f.remaining_slots) * slot_,
                 {.kind = EventKind::backoff_expiry,
                  .node = node,
                  .iface = ifc,
                  .gen = f.gen});
    }

    void chan_busy_inc(ChannelId ch) {
        ChannelBusy& c = chan_busy_[ch.index()];
        if (c.count++ == 0) c.since = now_;
    }

    void chan_busy_dec(ChannelId ch) {
        ChannelBusy& c = chan_busy_[ch.index()];
        if (--c.count == 0) c.integral_s += to_seconds(now_ - c.since);
    }

    double chan_busy_now(int idx) const {
        const ChannelBusy& c = chan_busy_[idx];
        return c.integral_s +
               (c.count > 0 ? to_seconds(now_ - c.since) : 0.0);
    }

    // --- queue service ------------------------------------------------------

    void reap_ttl(int node) {
        NodeState& n = nodes_[node];
        while (!n.sch_q.empty() && n.sch_q.front().expires_at <= now_) {
            n.sch_q.pop_front();
            ++ledger_.drops_ttl;
        }
    }

    bool scanning_i1(const NodeState& n, int ifc) const {
        return world_.scheme == Scheme::dcf_baseline && !n.is_rsu &&
               ifc == 0 && n.scan.scanning();
    }

    void try_serve(int node) {
        serve_iface(node, 0);
        serve_iface(node, 1);
    }

    void serve_iface(int node, int ifc) {
        NodeState& n = nodes_[node];
        Iface& f = n.ifaces[ifc];
        if (!f.enabled || !f.channel.valid()) return;
        if (f.transmitting || f.has_frame || f.retuning(now_)) return;
        if (scanning_i1(n, ifc)) return;
        if (f.channel.is_cch()) {
            if (n.cch_q.empty()) return;
            Frame fr = n.cch_q.front();
            n.cch_q.pop_front();
            start_contention(node, ifc, fr);
        } else {
            // I_2 sharing I_1's SCH (seam-clamped transition) adds nothing.
            if (ifc == 1 && n.ifaces[0].enabled &&
                f.channel == n.ifaces[0].channel)
                return;
            reap_ttl(node);
            if (n.sch_q.empty()) return;
            int dst = n.sch_q.front().dst;
            if (dst < 0) {
                dst = pick_receiver(node, f.channel);
                if (dst < 0) return; // no reachable peer on this SCH yet
            }
            Frame fr = n.sch_q.front();
            n.sch_q.pop_front();
            fr.dst = dst;
            start_contention(node, ifc, fr);
        }
    }

    int pick_receiver(int node, ChannelId ch) {
        const Vec2 my_pos = node_pos(node);
        std::vector<int> candidates;
        for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) {
            if (v == node) continue;
            const NodeState& other = nodes_[v];
            if (other.is_rsu || !other.configured) continue;
            bool tuned = false;
            for (const Iface& g : other.ifaces) {
                if (g.enabled && g.channel == ch && !g.retuning(now_)) {
                    tuned = true;
                    break;
                }
            }
            if (!tuned) continue;
            if (torus_dist(my_pos, node_pos(v)) > mac().tx_range_m) continue;
            candidates.push_back(v);
        }
        if (candidates.empty()) return -1;
        return candidates[mac_rng_.uniform_int(candidates.size())];
    }

    void start_contention(int node, int ifc, Frame fr) {
        Iface& f = nodes_[node].ifaces[ifc];
        fr.channel = f.channel;
        f.frame = fr;
        f.has_frame = true;
        const int cw = mac().contention_window(fr.attempts);
        f.remaining_slots = static_cast<int>(
            mac_rng_.uniform_int(static_cast<std::uint64_t>(cw) + 1));
        if (f.busy_count == 0) {
            arm_backoff(node, ifc);
        } else {
            f.cstate = CState::frozen;
            ++f.gen;
        }
    }

    // puts a frame back where it came from (cancelled contention)
    void requeue_front(int node, Frame fr) {
        NodeState& n = nodes_[node];
        if (fr.kind == FrameKind::nonsafety)
            n.sch_q.push_front(fr);
        else
            n.cch_q.push_front(fr);
    }

    void cancel_contention(int node, int ifc) {
        Iface& f = nodes_[node].ifaces[ifc];
        if (f.has_frame) {
            Frame fr = f.frame;
            f.has_frame = false;
            requeue_front(node, fr);
        }
        f.cstate = CState::idle;
        ++f.gen;
    }

    // aborts in-progress receptions on an iface; corrupt=true marks them as
    // interference losses (the receiver started transmitting), otherwise as
    // switching losses
    void abort_iface_rx(int node, int ifc, bool corrupt) {
        Iface& f = nodes_[node].ifaces[ifc];
        for (int h : f.rx_handles) {
            for (ActiveTx::Rx& rx : txs_[h].rxs) {
                if (rx.node == node && rx.iface == ifc && !rx.aborted &&
                    !rx.corrupted) {
                    if (corrupt)
                        rx.corrupted = true;
                    else
                        rx.aborted = true;
                }
            }
        }
        f.rx_handles.clear();
    }

    // --- retuning -----------------------------------------------------------

    // Retunes an idle-or-contending iface to `target`, cancelling contention
    // and receptions and refreshing its carrier-sense set. The caller must
    // ensure the iface is not transmitting.
    bool apply_retune(int node, int ifc, ChannelId target) {
        Iface& f = nodes_[node].ifaces[ifc];
        if (f.channel == target) return false;
        cancel_contention(node, ifc);
        abort_iface_rx(node, ifc, /*corrupt=*/false);
        for (int h = 0; h < static_cast<int>(txs_.size()); ++h) {
            ActiveTx& tx = txs_[h];
            if (!tx.alive || tx.ch != f.channel) continue;
            auto it = std::find(tx.sensors.begin(), tx.sensors.end(),
                                std::make_pair(node, ifc));
            if (it != tx.sensors.end()) {
                tx.sensors.erase(it);
                iface_busy_dec(node, ifc);
            }
        }
        f.channel = target;
        f.retuning_until = now_ + switch_latency_;
        const Vec2 my_pos = node_pos(node);
        for (int h = 0; h < static_cast<int>(txs_.size()); ++h) {
            ActiveTx& tx = txs_[h];
            if (!tx.alive || tx.ch != target) continue;
            if (tx.src == node && tx.src_iface == ifc) continue;
            if (torus_dist(tx.src_pos, my_pos) > mac().tx_range_m) continue;
            tx.sensors.emplace_back(node, ifc);
            iface_busy_inc(node, ifc);
            // joined mid-frame: sensed but never decodable
        }
        return true;
    }

    void apply_grid_tuning(int node) {
        NodeState& n = nodes_[node];
        Vehicle v = n.veh;
        v.position = node_pos(node);
        v.tuning.i1.channel = n.ifaces[0].channel;
        v.tuning.i2.channel = n.ifaces[1].channel;
        const InterfaceTuning want =
            grid_tuning(v, grid(), world_.plan, now_, switch_latency_);
        if (want.i1.channel != n.ifaces[0].channel &&
            !n.ifaces[0].transmitting) {
            if (apply_retune(node, 0, want.i1.channel))
                trace(EventKind::retune_check, node, want.i1.channel, -1, "i1");
        }
        if (want.i2.channel != n.ifaces[1].channel &&
            !n.ifaces[1].transmitting) {
            if (apply_retune(node, 1, want.i2.channel))
                trace(EventKind::retune_check, node, want.i2.channel, -1, "i2");
        }
    }

    void update_relay_state(int node) {
        NodeState& n = nodes_[node];
        const bool dual = !n.is_rsu && n.ifaces[0].enabled &&
                          n.ifaces[1].enabled &&
                          n.ifaces[0].channel.is_sch() &&
                          n.ifaces[1].channel.is_sch() &&
                          n.ifaces[0].channel != n.ifaces[1].channel;
        if (dual && !n.dual_sch) {
            n.dual_sch = true;
            n.dual_since = now_;
            ++ledger_.tz_relay_entries;
        } else if (!dual && n.dual_sch) {
            n.dual_sch = false;
            ledger_.tz_relay_seconds += to_seconds(now_ - n.dual_since);
        }
    }

    void configure_vehicle(int node) {
        NodeState& n = nodes_[node];
        if (n.configured) return;
        n.configured = true;
        n.ifaces[0].enabled = true;
        apply_grid_tuning(node);
        schedule_first_traffic(node, /*jitter_from_now=*/true);
    }

    // --- traffic ------------------------------------------------------------

    void schedule_first_traffic(int node, bool jitter_from_now) {
        NodeState& n = nodes_[node];
        const SimTime base = jitter_from_now ? now_ : 0;
        if (world_.traffic.safety_hz > 0.0) {
            const double period = 1.0 / world_.traffic.safety_hz;
            const SimTime t =
                base + from_seconds(n.traffic_rng.uniform() * period);
            schedule(t, {.kind = EventKind::traffic_arrival,
                         .node = node,
                         .aux = static_cast<int>(FrameKind::safety)});
        }
        if (world_.traffic.nonsafety_rate_hz > 0.0) {
            const SimTime t =
                base + from_seconds(n.traffic_rng.exponential(
                           world_.traffic.nonsafety_rate_hz));
            schedule(t, {.kind = EventKind::traffic_arrival,
                         .node = node,
                         .aux = static_cast<int>(FrameKind::nonsafety)});
        }
    }

    void handle_traffic_arrival(const Event& ev) {
        NodeState& n = nodes_[ev.node];
        const auto kind = static_cast<FrameKind>(ev.aux);
        Frame fr;
        fr.id = next_frame_id_++;
        fr.kind = kind;
        fr.src = ev.node;
        fr.created_at = now_;
        SimTime next = 0;
        switch (kind) {
            case FrameKind::safety:
                fr.payload_bits = world_.traffic.safety_payload_bits;
                n.cch_q.push_back(fr);
                next = now_ + from_seconds(1.0 / world_.traffic.safety_hz);
                break;
            case FrameKind::nonsafety:
                fr.payload_bits = world_.traffic.nonsafety_payload_bits;
                fr.expires_at =
                    now_ + from_seconds(world_.traffic.nonsafety_ttl_s);
                n.sch_q.push_back(fr);
                next = now_ + from_seconds(n.traffic_rng.exponential(
                                  world_.traffic.nonsafety_rate_hz));
                break;
            case FrameKind::bootstrap:
                fr.payload_bits = knobs().rsu_payload_bits;
                n.cch_q.push_back(fr);
                next = now_ + from_seconds(knobs().rsu_period_s);
                break;
        }
        ++ledger_.generated;
        trace(EventKind::traffic_arrival, ev.node,
              kind == FrameKind::nonsafety ? ChannelId{} : kCch, fr.id,
              frame_kind_name(kind));
        schedule(next, {.kind = EventKind::traffic_arrival,
                        .node = ev.node,
                        .aux = ev.aux});
        try_serve(ev.node);
    }

    // --- transmission lifecycle ----------------------------------------------

    void handle_backoff_expiry(const Event& ev) {
        Iface& f = nodes_[ev.node].ifaces[ev.iface];
        if (ev.gen != f.gen || f.cstate != CState::waiting) return; // stale
        f.cstate = CState::committed;
        schedule(now_, {.kind = EventKind::tx_start,
                        .node = ev.node,
                        .iface = ev.iface,
                        .gen = f.gen});
    }

    int alloc_tx() {
        if (!free_tx_.empty()) {
            const int h = free_tx_.back();
            free_tx_.pop_back();
            return h;
        }
        txs_.emplace_back();
        return static_cast<int>(txs_.size()) - 1;
    }

    void handle_tx_start(const Event& ev) {
        Iface& f = nodes_[ev.node].ifaces[ev.iface];
        if (ev.gen != f.gen || f.cstate != CState::committed) return; // stale
        Frame fr = f.frame;
        f.has_frame = false;
        f.cstate = CState::idle;
        ++f.gen;
        f.transmitting = true;
        fr.attempts += 1;

        const int h = alloc_tx();
        ActiveTx& tx = txs_[h];
        tx = ActiveTx{};
        tx.alive = true;
        tx.frame = fr;
        tx.src = ev.node;
        tx.src_iface = ev.iface;
        tx.src_pos = node_pos(ev.node);
        tx.ch = f.channel;
        tx.start = now_;
        tx.end = now_ + mac().airtime(fr.payload_bits);

        ++ledger_.access_counts[tx.ch.index()];
        chan_busy_inc(tx.ch);
        // half-duplex: anything we were receiving is lost to interference
        abort_iface_rx(ev.node, ev.iface, /*corrupt=*/true);

        for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) {
            const Vec2 vpos = node_pos(v);
            if (torus_dist(tx.src_pos, vpos) > mac().tx_range_m) continue;
            for (int j = 0; j < 2; ++j) {
                if (v == ev.node && j == ev.iface) continue;
                Iface& g = nodes_[v].ifaces[j];
                if (!g.enabled || g.channel != tx.ch) continue;
                tx.sensors.emplace_back(v, j);
                iface_busy_inc(v, j);
                if (v == ev.node) continue; // own node never decodes itself
                if (g.transmitting) continue;
                if (g.retuning(now_)) {
                    tx.deaf_in_range = true;
                    continue;
                }
                bool corrupted = false;
                if (!g.rx_handles.empty()) {
                    corrupted = true; // overlap: everything at this rx dies
                    for (int h2 : g.rx_handles)
                        for (ActiveTx::Rx& rx : txs_[h2].rxs)
                            if (rx.node == v && rx.iface == j)
                                rx.corrupted = true;
                }
                g.rx_handles.push_back(h);
                tx.rxs.push_back({v, j, corrupted, false});
            }
        }
        schedule(tx.end, {.kind = EventKind::tx_end, .handle = h});
        trace(EventKind::tx_start, ev.node, tx.ch, fr.id,
              frame_kind_name(fr.kind));
    }

    void handle_tx_end(const Event& ev) {
        ActiveTx& tx = txs_[ev.handle];
        if (!tx.alive) throw std::logic_error("tx_end on a dead handle");
        Iface& sf = nodes_[tx.src].ifaces[tx.src_iface];
        sf.transmitting = false;
        chan_busy_dec(tx.ch);
        for (auto [v, j] : tx.sensors) iface_busy_dec(v, j);

        bool any_corrupt = false;
        bool any_abort = tx.deaf_in_range;
        std::vector<int> decoders;
        for (const ActiveTx::Rx& rx : tx.rxs) {
            Iface& g = nodes_[rx.node].ifaces[rx.iface];
            g.rx_handles.erase(
                std::remove(g.rx_handles.begin(), g.rx_handles.end(),
                            ev.handle),
                g.rx_handles.end());
            if (rx.corrupted)
                any_corrupt = true;
            else if (rx.aborted)
                any_abort = true;
            else
                decoders.push_back(rx.node);
        }
        std::sort(decoders.begin(), decoders.end());
        decoders.erase(std::unique(decoders.begin(), decoders.end()),
                       decoders.end());

        const Frame fr = tx.frame;
        const int src = tx.src;
        const ChannelId ch = tx.ch;
        // Retire the handle before classification: configure_vehicle below
        // can retune interfaces, and a retune scans the alive transmissions
        // for sensor entries this one has already released.
        tx.alive = false;
        tx.rxs.clear();
        tx.sensors.clear();
        free_tx_.push_back(ev.handle);
        const char* outcome = "delivered";
        if (fr.dst == kBroadcastDst) {
            if (!decoders.empty()) {
                ++ledger_.delivered;
                if (fr.kind == FrameKind::safety && fr.created_at >= warmup_)
                    ledger_.safety_delay_samples.push_back(
                        to_seconds(now_ - fr.created_at));
                if (fr.kind == FrameKind::bootstrap)
                    for (int d : decoders) configure_vehicle(d);
            } else if (any_corrupt) {
                ++ledger_.drops_collision;
                outcome = "collision";
            } else if (any_abort) {
                ++ledger_.drops_switch;
                outcome = "switch";
            } else {
                ++ledger_.drops_no_receiver;
                outcome = "no_receiver";
            }
        } else {
            const bool decoded =
                std::find(decoders.begin(), decoders.end(), fr.dst) !=
                decoders.end();
            if (decoded) {
                ++ledger_.delivered;
                if (now_ >= warmup_) {
                    ledger_.delivered_payload_bits += fr.payload_bits;
                    ledger_.per_node_delivered[fr.src] += 1;
                }
                if (fr.created_at >= warmup_)
                    ledger_.delay_samples.push_back(
                        to_seconds(now_ - fr.created_at));
            } else if (fr.attempts > mac().max_retries) {
                ++ledger_.drops_retry;
                outcome = "retry_drop";
            } else {
                nodes_[src].sch_q.push_front(fr); // retry, dst kept
                outcome = "retry";
            }
        }
        trace(EventKind::tx_end, src, ch, fr.id, outcome);
        try_serve(src);
    }

    // --- baseline scanning ----------------------------------------------------

    void handle_scan_step(const Event& ev) {
        NodeState& n = nodes_[ev.node];
        Iface& f = n.ifaces[0];
        if (ev.aux == 0 && f.transmitting) {
            // sweep due mid-transmission: retry shortly, keep the anchor
            schedule(now_ + mob_step_,
                     {.kind = EventKind::scan_step, .node = ev.node, .aux = 0});
            return;
        }
        if (f.transmitting)
            throw std::logic_error("scan hop on a transmitting iface");
        // The first dwell channel can equal the parked channel, making the
        // retune below a no-op; armed contention must still be cancelled or
        // it would fire mid-sweep.
        if (ev.aux == 0) cancel_contention(ev.node, 0);
        if (ev.aux > 0) {
            const int prev = ev.aux - 1;
            const double busy = iface_busy_now(f) - n.dwell_mark_s;
            const double frac =
                knobs().dwell_s > 0.0
                    ? busy / knobs().dwell_s
                    : (f.busy_count > 0 ? 1.0 : 0.0);
            n.scan.busy_fraction[prev] = frac;
            n.scan.measured[prev] = true;
        }
        if (ev.aux < kNumSch) {
            n.scan.scan_position = ev.aux;
            const ChannelId ch = sch_channels()[ev.aux];
            apply_retune(ev.node, 0, ch);
            n.dwell_mark_s = iface_busy_now(f);
            schedule(now_ + from_seconds(knobs().dwell_s),
                     {.kind = EventKind::scan_step,
                      .node = ev.node,
                      .aux = ev.aux + 1});
            trace(EventKind::scan_step, ev.node, ch, -1, "dwell");
        } else {
            n.scan.scan_position = kNumSch;
            const ChannelId best = least_congested(n.scan);
            apply_retune(ev.node, 0, best);
            n.sweep_start += from_seconds(knobs().epoch_s);
            schedule(n.sweep_start,
                     {.kind = EventKind::scan_step, .node = ev.node, .aux = 0});
            trace(EventKind::scan_step, ev.node, best, -1, "park");
            try_serve(ev.node);
        }
    }

    // --- periodic bookkeeping ---------------------------------------------------

    void handle_retune_check(const Event&) {
        for (int v = 0; v < n_vehicles_; ++v) {
            if (world_.scheme == Scheme::grid && nodes_[v].configured)
                apply_grid_tuning(v);
            update_relay_state(v);
            reap_ttl(v);
            try_serve(v);
        }
        for (int v = n_vehicles_; v < static_cast<int>(nodes_.size()); ++v)
            try_serve(v); // RSU
        schedule(now_ + mob_step_, {.kind = EventKind::retune_check});
    }

    void handle_metrics_sample(const Event&) {
        for (int i = 0; i < kNumChannels; ++i)
            chan_busy_[i].window_mark_s = chan_busy_now(i);
        trace(EventKind::metrics_sample, -1, ChannelId{}, -1, "warmup_end");
    }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EventKind::traffic_arrival: handle_traffic_arrival(ev); break;
            case EventKind::backoff_expiry: handle_backoff_expiry(ev); break;
            case EventKind::tx_start: handle_tx_start(ev); break;
            case EventKind::tx_end: handle_tx_end(ev); break;
            case EventKind::scan_step: handle_scan_step(ev); break;
            case EventKind::retune_check: handle_retune_check(ev); break;
            case EventKind::metrics_sample: handle_metrics_sample(ev); break;
        }
    }

    // --- setup & teardown ---------------------------------------------------------

    void init_nodes() {
        n_vehicles_ = static_cast<int>(world_.vehicles.size());
        nodes_.reserve(world_.vehicles.size() + 1);
        for (const Vehicle& v : world_.vehicles) {
            NodeState n;
            n.veh = v;
            n.traffic_rng =
                Rng(mix_seed(mix_seed(seed_, kStreamTraffic),
                             static_cast<std::uint64_t>(nodes_.size())));
            nodes_.push_back(std::move(n));
        }
        ledger_.per_node_delivered.assign(
            static_cast<size_t>(n_vehicles_), 0);

        if (world_.scheme == Scheme::grid) {
            for (int i = 0; i < n_vehicles_; ++i) {
                NodeState& n = nodes_[i];
                n.configured = knobs().start_configured;
                if (n.configured) {
                    Vehicle v = n.veh;
                    const InterfaceTuning want =
                        grid_tuning(v, grid(), world_.plan, 0, 0);
                    n.ifaces[0].channel = want.i1.channel;
                    n.ifaces[1].channel = want.i2.channel;
                    schedule_first_traffic(i, /*jitter_from_now=*/false);
                } else {
                    n.ifaces[0].enabled = false;
                    n.ifaces[1].channel = kCch;
                }
            }
            if (knobs().rsu_enabled) {
                NodeState rsu;
                rsu.is_rsu = true;
                rsu.veh.id = n_vehicles_;
                rsu.veh.position = {
                    grid().origin().x + grid().width() / 2.0,
                    grid().origin().y + grid().height() / 2.0};
                rsu.ifaces[0].enabled = false;
                rsu.ifaces[1].channel = kCch;
                rsu.traffic_rng = Rng(mix_seed(seed_, kStreamScan));
                nodes_.push_back(std::move(rsu));
                const int rsu_id = static_cast<int>(nodes_.size()) - 1;
                schedule(0, {.kind = EventKind::traffic_arrival,
                             .node = rsu_id,
                             .aux = static_cast<int>(FrameKind::bootstrap)});
            }
        } else {
            for (int i = 0; i < n_vehicles_; ++i) {
                NodeState& n = nodes_[i];
                n.configured = true;
                n.ifaces[0].channel = sch_channels()[0];
                n.ifaces[1].channel = kCch;
                Rng scan_rng(mix_seed(mix_seed(seed_, kStreamScan),
                                      static_cast<std::uint64_t>(i)));
                n.sweep_start =
                    from_seconds(scan_rng.uniform() * knobs().epoch_s);
                schedule(n.sweep_start,
                         {.kind = EventKind::scan_step, .node = i, .aux = 0});
                schedule_first_traffic(i, /*jitter_from_now=*/false);
            }
        }
    }

    void finalize() {
        now_ = end_;
        for (int i = 0; i < kNumChannels; ++i) {
            const double busy =
                chan_busy_now(i) - chan_busy_[i].window_mark_s;
            ledger_.busy_seconds[i] = std::max(0.0, busy);
        }
        for (NodeState& n : nodes_) {
            if (n.dual_sch)
                ledger_.tz_relay_seconds += to_seconds(now_ - n.dual_since);
            ledger_.in_flight_at_end +=
                static_cast<std::int64_t>(n.cch_q.size());
            for (const Frame& fr : n.sch_q) {
                if (fr.expires_at <= end_)
                    ++ledger_.drops_ttl;
                else
                    ++ledger_.in_flight_at_end;
            }
            for (const Iface& f : n.ifaces)
                if (f.has_frame) ++ledger_.in_flight_at_end;
        }
        for (const ActiveTx& tx : txs_)
            if (tx.alive) ++ledger_.in_flight_at_end;
        ledger_.window_s = to_seconds(end_ - warmup_);
        if (!ledger_.conservation_holds())
            throw std::logic_error("frame conservation violated");
    }
};

} // namespace

MetricsLedger run(const World& world, double duration_s, std::uint64_t seed,
                  std::ostream* trace) {
    Engine engine(world, duration_s, seed, trace);
    return engine.run_all();
}

} // namespace gridmc
