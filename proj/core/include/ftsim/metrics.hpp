#pragma once

#include <cstdint>
#include <vector>

#include "ftsim/types.hpp"

namespace ftsim::engine {

struct MetricsBin {
  TimeNs start_ns = 0;
  std::int64_t delivered_bytes = 0;
  std::int64_t injected_bytes = 0;
};

// Per-bin traffic counters of one run plus run totals.
struct MetricsSeries {
  TimeNs bin_ns = 0;
  TimeNs warmup_ns = 0;
  TimeNs duration_ns = 0;
  int node_count = 0;
  double link_bandwidth_gbps = 0.0;
  std::vector<MetricsBin> bins;

  std::int64_t injected_packets = 0;
  std::int64_t refused_packets = 0;  // generated while their VC's NIC queue was full
  std::int64_t delivered_packets = 0;
  std::int64_t steady_latency_sum_ns = 0;  // deliveries at or after warm-up
  std::int64_t steady_deliveries = 0;
  int audits = 0;

  // Bytes normalized by the aggregate end-node bandwidth over the bin.
  double delivered_frac(std::size_t bin) const;
  double injected_frac(std::size_t bin) const;

  // Mean delivered fraction over bins starting in [warmup, duration).
  double steady_state_throughput() const;
  double steady_state_injection() const;
  double mean_latency_ns() const;
};

}  // namespace ftsim::engine
