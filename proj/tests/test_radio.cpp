#include <stdexcept>

#include "doctest.h"
#include "gridmc/plan.hpp"
#include "gridmc/radio.hpp"
#include "gridmc/rng.hpp"

using namespace gridmc;

namespace {

ScanState measured(std::array<double, kNumSch> fractions) {
    ScanState s;
    s.busy_fraction = fractions;
    s.measured.fill(true);
    s.scan_position = kNumSch;
    return s;
}

GridMap scenario_grid(double tz = 10.0) {
    return build_grid(18, 6, 5.0, 55.56, Vec2{0, 0}, tz);
}

Vehicle at(Vec2 pos, Vec2 vel) {
    Vehicle v;
    v.position = pos;
    v.velocity = vel;
    return v;
}

} // namespace

TEST_CASE("least_congested takes the argmin, ties to the lowest channel") {
    // {172:0.3, 174:0.1, 176:0.5, 180:0.4, 182:0.2, 184:0.6}
    CHECK(least_congested(measured({0.3, 0.1, 0.5, 0.4, 0.2, 0.6})) ==
          ChannelId(174));
    CHECK(least_congested(measured({0.2, 0.2, 0.2, 0.2, 0.2, 0.2})) ==
          ChannelId(172));
    CHECK(least_congested(measured({0.9, 0.8, 0.7, 0.6, 0.5, 0.4})) ==
          ChannelId(184));
    CHECK(least_congested(measured({0.0, 0.8, 0.0, 0.6, 0.5, 0.4})) ==
          ChannelId(172));
}

TEST_CASE("least_congested follows any permutation of the values") {
    const std::array<double, kNumSch> base = {0.3, 0.1, 0.5, 0.4, 0.2, 0.6};
    std::array<int, kNumSch> perm = {0, 1, 2, 3, 4, 5};
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        for (int i = kNumSch - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_int(i + 1));
            std::swap(perm[i], perm[j]);
        }
        std::array<double, kNumSch> shuffled{};
        for (int i = 0; i < kNumSch; ++i) shuffled[i] = base[perm[i]];
        int want = 0;
        for (int i = 1; i < kNumSch; ++i)
            if (shuffled[i] < shuffled[want]) want = i;
        CHECK(least_congested(measured(shuffled)) == sch_channels()[want]);
    }
}

TEST_CASE("least_congested requires a complete sweep") {
    ScanState s = measured({0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
    s.measured[3] = false;
    CHECK_THROWS_AS(least_congested(s), std::logic_error);
}

TEST_CASE("grid tuning mid-cell: own SCH + CCH") {
    const GridMap g = scenario_grid();
    const ChannelPlan plan = build_plan(18, 6);
    const Vehicle v = at(g.cell_center({2, 1}), {0, 13.889});
    const InterfaceTuning t = grid_tuning(v, g, plan, 0, from_micros(2000));
    CHECK(t.i1.channel == channel_of(plan, {2, 1}));
    CHECK(t.i1.channel.is_sch());
    CHECK(t.i2.channel == kCch);
}

TEST_CASE("grid tuning in a TZ: i2 pre-tunes to the next cell's SCH") {
    const GridMap g = scenario_grid();
    const ChannelPlan plan = build_plan(18, 6);
    // 5 m from the north edge of (2,1), well inside the 10 m band
    const Vec2 pos{7.5, 3 * 55.56 - 5.0};
    const Vehicle v = at(pos, {0, 13.889});
    REQUIRE(transition_state(g, pos, v.velocity).in_tz);
    const InterfaceTuning t = grid_tuning(v, g, plan, 0, from_micros(2000));
    CHECK(t.i1.channel == channel_of(plan, {2, 1}));
    CHECK(t.i2.channel == channel_of(plan, {3, 1}));
    CHECK(t.i2.channel.is_sch());
    CHECK(t.holds_two_sch());
}

TEST_CASE("tz_depth 0 pins i2 to the control channel everywhere") {
    const GridMap g = scenario_grid(0.0);
    const ChannelPlan plan = build_plan(18, 6);
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const Vec2 pos{rng.uniform() * g.width(), rng.uniform() * g.height()};
        const Vehicle v = at(pos, {0, rng.uniform() < 0.5 ? 13.889 : -13.889});
        const InterfaceTuning t = grid_tuning(v, g, plan, 0, 0);
        CHECK(t.i2.channel == kCch);
    }
}

TEST_CASE("changed channels are stamped deaf, unchanged keep their stamp") {
    const GridMap g = scenario_grid();
    const ChannelPlan plan = build_plan(18, 6);
    Vehicle v = at(g.cell_center({2, 1}), {0, 13.889});
    const SimTime lat = from_micros(2000);

    InterfaceTuning t0 = grid_tuning(v, g, plan, from_seconds(1.0), lat);
    // both channels changed from the unset defaults
    CHECK(t0.i1.retuning_until == from_seconds(1.0) + lat);
    CHECK(t0.i2.retuning_until == from_seconds(1.0) + lat);
    CHECK(t0.i1.retuning(from_seconds(1.0)));
    CHECK(t0.i1.retuning(from_seconds(1.0) + lat - 1));
    CHECK_FALSE(t0.i1.retuning(from_seconds(1.0) + lat));

    // same cell later: nothing changes, stamps are preserved
    v.tuning = t0;
    InterfaceTuning t1 = grid_tuning(v, g, plan, from_seconds(2.0), lat);
    CHECK(t1.i1.channel == t0.i1.channel);
    CHECK(t1.i1.retuning_until == t0.i1.retuning_until);
    CHECK(t1.i2.retuning_until == t0.i2.retuning_until);

    // move to the next cell: i1 re-stamps, i2 stays on CCH unstamped
    v.tuning = t1;
    v.position = g.cell_center({3, 1});
    REQUIRE(channel_of(plan, {3, 1}) != channel_of(plan, {2, 1}));
    InterfaceTuning t2 = grid_tuning(v, g, plan, from_seconds(3.0), lat);
    CHECK(t2.i1.channel == channel_of(plan, {3, 1}));
    CHECK(t2.i1.retuning_until == from_seconds(3.0) + lat);
    CHECK(t2.i2.channel == kCch);
    CHECK(t2.i2.retuning_until == t1.i2.retuning_until);
}

TEST_CASE("grid tuning matches a rule-by-rule re-derivation") {
    const GridMap g = scenario_grid();
    const ChannelPlan plan = build_plan(18, 6);
    Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const Vec2 pos{rng.uniform() * 36.0 - 3.0,
                       rng.uniform() * 1030.0 - 15.0};
        const double speed = 13.889;
        Vec2 vel{0, rng.uniform() < 0.5 ? speed : -speed};
        if (rng.uniform() < 0.1) vel = {0, 0};
        const Vehicle v = at(pos, vel);
        const InterfaceTuning t = grid_tuning(v, g, plan, 0, 0);

        const GridCoord cell = locate(g, pos);
        CHECK(t.i1.channel == channel_of(plan, cell));
        CHECK(t.i1.channel.is_sch());
        const TzStatus st = transition_state(g, pos, vel);
        if (st.in_tz) {
            CHECK(t.i2.channel == channel_of(plan, st.next_cell));
            CHECK_FALSE(t.i2.channel == kCch);
        } else {
            CHECK(t.i2.channel == kCch);
        }
    }
}

TEST_CASE("baseline tuning follows the sweep, then parks") {
    Vehicle v;
    const SimTime lat = from_micros(2000);

    ScanState sweeping;
    sweeping.scan_position = 2;
    const InterfaceTuning t = baseline_tuning(v, sweeping, 0, lat);
    CHECK(t.i2.channel == kCch);
    CHECK(t.i1.channel == sch_channels()[2]);

    const ScanState parked = measured({0.3, 0.1, 0.5, 0.4, 0.2, 0.6});
    const InterfaceTuning p = baseline_tuning(v, parked, 0, lat);
    CHECK(p.i1.channel == ChannelId(174));
    CHECK(p.i2.channel == kCch);

    // stable occupancy between epochs: i1 unchanged and no new stamp
    Vehicle w;
    w.tuning = p;
    const InterfaceTuning q = baseline_tuning(w, parked, from_seconds(1), lat);
    CHECK(q.i1.channel == p.i1.channel);
    CHECK(q.i1.retuning_until == p.i1.retuning_until);
}

TEST_CASE("i1 never holds the control channel") {
    const GridMap g = scenario_grid();
    const ChannelPlan plan = build_plan(18, 6);
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const Vec2 pos{rng.uniform() * 30.0, rng.uniform() * 1000.0};
        const Vehicle v = at(pos, {0, 13.889});
        CHECK(grid_tuning(v, g, plan, 0, 0).i1.channel.is_sch());
        ScanState s;
        s.scan_position = static_cast<int>(rng.uniform_int(kNumSch));
        CHECK(baseline_tuning(v, s, 0, 0).i1.channel.is_sch());
    }
}
