#include "gridmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gridmc {

double mean_delay(const MetricsLedger& m) {
    if (m.delay_samples.empty())
        throw std::domain_error("mean_delay: no delivered frames");
    const double sum = std::accumulate(m.delay_samples.begin(),
                                       m.delay_samples.end(), 0.0);
    return sum / static_cast<double>(m.delay_samples.size());
}

double p95_delay(const MetricsLedger& m) {
    if (m.delay_samples.empty())
        throw std::domain_error("p95_delay: no delivered frames");
    std::vector<double> s = m.delay_samples;
    std::sort(s.begin(), s.end());
    // nearest-rank: the ceil(0.95 n)-th order statistic
    const auto rank = static_cast<size_t>(
        std::ceil(0.95 * static_cast<double>(s.size())));
    return s[std::max<size_t>(rank, 1) - 1];
}

double throughput_bps(const MetricsLedger& m) {
    if (m.window_s <= 0.0)
        throw std::domain_error("throughput: empty measurement window");
    return static_cast<double>(m.delivered_payload_bits) / m.window_s;
}

double channel_utilization(const MetricsLedger& m, ChannelId ch) {
    if (m.window_s <= 0.0)
        throw std::domain_error("channel_utilization: empty window");
    return m.busy_seconds[ch.index()] / m.window_s;
}

double mean_sch_utilization(const MetricsLedger& m) {
    double sum = 0.0;
    for (ChannelId ch : sch_channels()) sum += channel_utilization(m, ch);
    return sum / kNumSch;
}

double jain_index(std::span<const std::int64_t> per_node) {
    if (per_node.empty())
        throw std::domain_error("jain_index: no nodes");
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t v : per_node) {
        const double x = static_cast<double>(v);
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq == 0.0)
        throw std::domain_error("jain_index: all counts zero");
    return sum * sum / (static_cast<double>(per_node.size()) * sum_sq);
}

double jain_index(const MetricsLedger& m) {
    return jain_index(std::span<const std::int64_t>(m.per_node_delivered));
}

RelayOpportunities tz_relay_opportunities(const MetricsLedger& m) {
    return {m.tz_relay_seconds, m.tz_relay_entries};
}

} // namespace gridmc
