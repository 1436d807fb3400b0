#include "ftsim/metrics.hpp"

#include <algorithm>

namespace ftsim::engine {

namespace {

double normalize(const MetricsSeries& m, std::int64_t bytes, TimeNs width) {
  if (width <= 0 || m.node_count <= 0 || m.link_bandwidth_gbps <= 0.0) return 0.0;
  // Gbps equals bits per nanosecond.
  return static_cast<double>(bytes) * 8.0 /
         (static_cast<double>(m.node_count) * m.link_bandwidth_gbps * static_cast<double>(width));
}

TimeNs width_of(const MetricsSeries& m, std::size_t bin) {
  const TimeNs end = std::min(m.bins[bin].start_ns + m.bin_ns, m.duration_ns);
  return end - m.bins[bin].start_ns;
}

template <typename Field>
double steady_mean(const MetricsSeries& m, Field field) {
  double sum = 0.0;
  TimeNs covered = 0;
  for (std::size_t i = 0; i < m.bins.size(); ++i) {
    if (m.bins[i].start_ns < m.warmup_ns) continue;
    const TimeNs w = width_of(m, i);
    sum += normalize(m, field(m.bins[i]), w) * static_cast<double>(w);
    covered += w;
  }
  return covered > 0 ? sum / static_cast<double>(covered) : 0.0;
}

}  // namespace

double MetricsSeries::delivered_frac(std::size_t bin) const {
  return normalize(*this, bins.at(bin).delivered_bytes, width_of(*this, bin));
}

double MetricsSeries::injected_frac(std::size_t bin) const {
  return normalize(*this, bins.at(bin).injected_bytes, width_of(*this, bin));
}

double MetricsSeries::steady_state_throughput() const {
  return steady_mean(*this, [](const MetricsBin& b) { return b.delivered_bytes; });
}

double MetricsSeries::steady_state_injection() const {
  return steady_mean(*this, [](const MetricsBin& b) { return b.injected_bytes; });
}

double MetricsSeries::mean_latency_ns() const {
  return steady_deliveries > 0 ? static_cast<double>(steady_latency_sum_ns) / static_cast<double>(steady_deliveries)
                               : 0.0;
}

}  // namespace ftsim::engine
