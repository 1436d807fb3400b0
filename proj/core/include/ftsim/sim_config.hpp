#pragma once

#include <cstdint>

#include "ftsim/queuing.hpp"
#include "ftsim/routing.hpp"
#include "ftsim/topology.hpp"
#include "ftsim/traffic.hpp"
#include "ftsim/types.hpp"

namespace ftsim::engine {

struct SimConfig {
  double link_bandwidth_gbps = 100.0;
  TimeNs propagation_ns = 6;
  TimeNs duration_ns = 3'000'000;
  TimeNs warmup_ns = 1'000'000;
  std::uint64_t seed = 1;
  TimeNs metrics_bin_ns = 10'000;
  TimeNs audit_interval_ns = 100'000;  // 0 disables periodic audits

  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct SwitchConfig {
  bool voq = false;
  int buffer_bytes = 192'000;  // per input port, shared out statically across VCs
  int mtu_bytes = 4'000;

  int buffer_packets() const { return buffer_bytes / mtu_bytes; }
  int vc_capacity(int vcs) const { return buffer_packets() / vcs; }
  void validate(int vcs) const;

  friend bool operator==(const SwitchConfig&, const SwitchConfig&) = default;
};

// Time to push one MTU onto a link. Must come out as whole nanoseconds.
TimeNs serialization_ns(int mtu_bytes, double bandwidth_gbps);

// Everything one simulation run needs.
struct RunSpec {
  topology::RlftParams topology;
  routing::RoutingConfig routing;
  queuing::QueueScheme queuing;
  SwitchConfig sw;
  traffic::TrafficPattern traffic;
  SimConfig sim;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

}  // namespace ftsim::engine
