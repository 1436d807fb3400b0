#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ftsim/metrics.hpp"
#include "ftsim/sim_config.hpp"
#include "ftsim/traffic.hpp"

namespace ftsim::engine {

// A packet crossing a link. `sw` is the sending switch id for sends and the
// receiving switch id for arrivals; -1 means an end-node.
struct HopRecord {
  enum class Kind : std::uint8_t { send, arrive } kind = Kind::send;
  TimeNs time = 0;
  std::uint64_t packet = 0;
  int sw = -1;
  PortIndex port = 0;  // output port on send, input port on arrival
  NodeId node = 0;     // end-node involved when sw == -1
};

using HopObserver = std::function<void(const HopRecord&)>;

// One network, one run. Build, optionally override the traffic roles, then
// call run() once.
class Simulator {
 public:
  explicit Simulator(const RunSpec& spec);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  // Replaces the seeded role assignment.
  void set_roles(traffic::Roles roles);
  // Only sources flagged true inject. Defaults to all.
  void set_active_sources(std::vector<bool> active);
  // Called for every link send and arrival. Tests only; slows the run.
  void set_hop_observer(HopObserver observer);

  MetricsSeries run();

  // Credit and packet conservation over the whole network; throws
  // SimulationError naming the first broken link.
  void audit() const;

  const topology::Rlft& topology() const;
  TimeNs serialization_ns() const;
  int vc_capacity() const;
  // Window over which at least one delivery must happen while traffic is
  // outstanding.
  TimeNs liveness_window_ns() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Builds, runs and discards a Simulator.
MetricsSeries run(const RunSpec& spec);

}  // namespace ftsim::engine
