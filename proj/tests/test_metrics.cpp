#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gridmc/metrics.hpp"

using namespace gridmc;

TEST_CASE("mean_delay averages the samples") {
    MetricsLedger m;
    m.delay_samples = {0.002, 0.004};
    CHECK(mean_delay(m) == doctest::Approx(0.003));
    m.delay_samples = {0.0137};
    CHECK(mean_delay(m) == doctest::Approx(0.0137));
    m.delay_samples.clear();
    CHECK_THROWS_AS(mean_delay(m), std::domain_error);
}

TEST_CASE("p95_delay uses the nearest-rank percentile") {
    MetricsLedger m;
    for (int i = 1; i <= 100; ++i)
        m.delay_samples.push_back(static_cast<double>(i));
    CHECK(p95_delay(m) == doctest::Approx(95.0)); // ceil(0.95*100) = 95th
    m.delay_samples = {7.0};
    CHECK(p95_delay(m) == doctest::Approx(7.0));
    m.delay_samples = {3.0, 1.0, 2.0}; // unsorted input, ceil(2.85) = 3rd
    CHECK(p95_delay(m) == doctest::Approx(3.0));
    m.delay_samples.clear();
    CHECK_THROWS_AS(p95_delay(m), std::domain_error);
}

TEST_CASE("throughput is delivered nonsafety bits over the window") {
    MetricsLedger m;
    m.window_s = 10.0;
    m.delivered_payload_bits = 6'000'000;
    CHECK(throughput_bps(m) == doctest::Approx(600'000.0));
    m.delivered_payload_bits = 12'000'000;
    CHECK(throughput_bps(m) == doctest::Approx(1'200'000.0)); // linear
    m.delivered_payload_bits = 0;
    CHECK(throughput_bps(m) == doctest::Approx(0.0));
    m.window_s = 0.0;
    CHECK_THROWS_AS(throughput_bps(m), std::domain_error);
}

TEST_CASE("jain_index formula and bounds") {
    const std::vector<std::int64_t> equal = {5, 5, 5, 5};
    CHECK(jain_index(equal) == doctest::Approx(1.0));
    const std::vector<std::int64_t> solo = {1, 0, 0, 0};
    CHECK(jain_index(solo) == doctest::Approx(0.25));
    const std::vector<std::int64_t> pair = {2, 4};
    CHECK(jain_index(pair) == doctest::Approx(0.9)); // 36 / (2*20)

    const std::vector<std::int64_t> empty;
    CHECK_THROWS_AS(jain_index(empty), std::domain_error);
    const std::vector<std::int64_t> zeros = {0, 0, 0};
    CHECK_THROWS_AS(jain_index(zeros), std::domain_error);

    // 1/n <= J <= 1, J = 1 iff all equal
    const std::vector<std::int64_t> mixed = {9, 3, 1, 7, 5};
    const double j = jain_index(mixed);
    CHECK(j >= 1.0 / 5 - 1e-12);
    CHECK(j < 1.0);
}

TEST_CASE("channel_utilization is busy time over the window") {
    MetricsLedger m;
    m.window_s = 10.0;
    CHECK(channel_utilization(m, ChannelId(172)) == doctest::Approx(0.0));
    m.busy_seconds[ChannelId(172).index()] = 1.0;
    CHECK(channel_utilization(m, ChannelId(172)) == doctest::Approx(0.1));
    CHECK(channel_utilization(m, ChannelId(174)) == doctest::Approx(0.0));
    CHECK(channel_utilization(m, kCch) == doctest::Approx(0.0));
    m.window_s = 0.0;
    CHECK_THROWS_AS(channel_utilization(m, kCch), std::domain_error);
}

TEST_CASE("mean_sch_utilization averages the six service channels") {
    MetricsLedger m;
    m.window_s = 10.0;
    for (const ChannelId& ch : sch_channels())
        m.busy_seconds[ch.index()] = 2.0;
    m.busy_seconds[kCch.index()] = 9.0; // must not leak into the SCH mean
    CHECK(mean_sch_utilization(m) == doctest::Approx(0.2));
}

TEST_CASE("relay opportunities copy through from the ledger") {
    MetricsLedger m;
    m.tz_relay_seconds = 1.44;
    m.tz_relay_entries = 2;
    const RelayOpportunities r = tz_relay_opportunities(m);
    CHECK(r.seconds == doctest::Approx(1.44));
    CHECK(r.entries == 2);
}

TEST_CASE("conservation_holds checks the full balance") {
    MetricsLedger m;
    m.generated = 10;
    m.delivered = 4;
    m.drops_collision = 2;
    m.drops_switch = 1;
    m.drops_retry = 1;
    m.drops_ttl = 1;
    m.drops_no_receiver = 0;
    m.in_flight_at_end = 1;
    CHECK(m.conservation_holds());
    m.generated = 11;
    CHECK_FALSE(m.conservation_holds());
}
