#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ftsim/topology.hpp"
#include "ftsim/types.hpp"

namespace ftsim::traffic {

enum class PatternKind : std::uint8_t { uniform, hotspot, intermediate_hotspot };

std::string to_string(PatternKind kind);
PatternKind parse_pattern(const std::string& name);

// An upward output port of a stage-2 switch: switch index within stage 2 and
// upward port index 0..K-1.
struct Stage2Port {
  int switch_index = 0;
  int up_port = 0;

  friend bool operator==(const Stage2Port&, const Stage2Port&) = default;
};

struct TrafficPattern {
  PatternKind kind = PatternKind::uniform;
  double fraction = 0.1;              // share of sources that are hotspot/IHS senders
  std::vector<NodeId> hotspots;       // hotspot end-nodes
  std::vector<Stage2Port> ihs_ports;  // empty: pick a default spread of ports
  double load = 1.0;                  // offered load, fraction of link bandwidth

  void validate(const topology::Rlft& rlft) const;

  friend bool operator==(const TrafficPattern&, const TrafficPattern&) = default;
};

enum class RoleKind : std::uint8_t { uniform, hotspot, intermediate };

struct Role {
  RoleKind kind = RoleKind::uniform;
  NodeId target = 0;  // hotspot sender: fixed destination
  int port = -1;      // IHS sender: index into Roles::ihs_sets
};

struct Roles {
  std::vector<Role> per_node;
  std::vector<std::vector<NodeId>> ihs_sets;
};

// Picks which sources send to hotspots. Hotspot end-nodes never target
// themselves, so they are excluded from the sender pool. IHS senders are drawn
// from the subtree of the stage-2 switch owning their port, which is where the
// D-mod-K routes through that port originate.
Roles assign_roles(const TrafficPattern& pattern, const topology::Rlft& rlft, std::mt19937_64& rng);

NodeId next_destination(NodeId src, const Role& role, const Roles& roles, int node_count,
                        std::mt19937_64& rng);

// Destinations whose D-mod-K route from some source crosses the port.
std::vector<NodeId> ihs_destination_set(const topology::Rlft& rlft, const Stage2Port& port);

// Four ports on distinct stage-2 groups spread across the network.
std::vector<Stage2Port> default_ihs_ports(const topology::Rlft& rlft);

// Maps a node id of the 11664-node reference network onto an n-node network.
NodeId scale_node_id(NodeId reference_id, int node_count);

// The reference four hotspot ids, scaled to the network.
std::vector<NodeId> reference_hotspots(int node_count);

// Named scenarios: uniform, HS10-1, HS25-1, HS10-4, HS25-4, IHS.
TrafficPattern named_scenario(const std::string& name, const topology::Rlft& rlft, double load);

// Poisson packet generator for one source.
class InjectionProcess {
 public:
  InjectionProcess(double serialization_ns, double load);

  bool active() const { return mean_gap_ns_ > 0.0; }
  double mean_gap_ns() const { return mean_gap_ns_; }
  // Exponential inter-arrival gap in ns.
  double next_gap(std::mt19937_64& rng) const;

 private:
  double mean_gap_ns_ = 0.0;
};

}  // namespace ftsim::traffic
