#include "ftsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ftsim/error.hpp"

namespace ftsim::traffic {

namespace {

constexpr int kReferenceNodes = 11664;
constexpr NodeId kReferenceHotspots[] = {600, 3400, 5200, 9500};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int sender_count(double fraction, int pool) {
  return static_cast<int>(std::floor(fraction * pool + 1e-9));
}

}  // namespace

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::uniform: return "uniform";
    case PatternKind::hotspot: return "hs";
    case PatternKind::intermediate_hotspot: return "ihs";
  }
  return "?";
}

PatternKind parse_pattern(const std::string& name) {
  if (name == "uniform") return PatternKind::uniform;
  if (name == "hs") return PatternKind::hotspot;
  if (name == "ihs") return PatternKind::intermediate_hotspot;
  throw ConfigError("unknown traffic pattern '" + name + "' (expected uniform, hs or ihs)");
}

void TrafficPattern::validate(const topology::Rlft& rlft) const {
  if (!(load >= 0.0 && load <= 1.0)) throw TrafficError("offered load must lie in [0,1]");
  if (kind == PatternKind::uniform) return;
  if (!(fraction > 0.0 && fraction <= 1.0)) throw TrafficError("sender fraction must lie in (0,1]");
  if (kind == PatternKind::hotspot) {
    if (hotspots.empty()) throw TrafficError("hotspot pattern needs at least one hotspot node");
    for (NodeId h : hotspots) {
      if (h >= static_cast<NodeId>(rlft.node_count())) {
        throw TrafficError("hotspot node " + std::to_string(h) + " is not in the topology");
      }
    }
  } else {
    if (rlft.stages() < 3) throw TrafficError("intermediate hotspots need at least 3 stages");
    for (const Stage2Port& p : ihs_ports) {
      if (p.switch_index < 0 || p.switch_index >= rlft.switches_in_stage(2) || p.up_port < 0 ||
          p.up_port >= rlft.arity()) {
        throw TrafficError("invalid stage-2 upward port " + std::to_string(p.switch_index) + ":" +
                           std::to_string(p.up_port));
      }
    }
  }
}

std::vector<NodeId> ihs_destination_set(const topology::Rlft& rlft, const Stage2Port& port) {
  if (rlft.stages() < 3) throw TrafficError("stage 2 has no upward ports in a " + std::to_string(rlft.stages()) +
                                            "-stage network");
  if (port.up_port < 0 || port.up_port >= rlft.arity() || port.switch_index < 0 ||
      port.switch_index >= rlft.switches_in_stage(2)) {
    throw TrafficError("not an upward stage-2 port: " + std::to_string(port.switch_index) + ":" +
                       std::to_string(port.up_port));
  }
  // Upward traffic reaches this switch from stage 1 only when digit 0 of the
  // destination matches the switch's low label digit; digit 1 picks the port.
  const topology::SwitchPosition pos{2, port.switch_index};
  const int low_digit = port.switch_index % rlft.arity();
  std::vector<NodeId> out;
  for (NodeId d = 0; d < static_cast<NodeId>(rlft.node_count()); ++d) {
    if (rlft.digit(d, 0) == low_digit && rlft.digit(d, 1) == port.up_port && !rlft.in_subtree(pos, d)) {
      out.push_back(d);
    }
  }
  if (out.empty()) throw TrafficError("stage-2 port carries no destinations");
  return out;
}

std::vector<Stage2Port> default_ihs_ports(const topology::Rlft& rlft) {
  if (rlft.stages() < 3) throw TrafficError("intermediate hotspots need at least 3 stages");
  const int k = rlft.arity();
  const int groups = rlft.switches_in_stage(2) / k;
  std::vector<Stage2Port> out;
  for (int i = 0; i < 4; ++i) {
    const int g = (i * groups) / 4;
    Stage2Port p{g * k, i % k};
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

Roles assign_roles(const TrafficPattern& pattern, const topology::Rlft& rlft, std::mt19937_64& rng) {
  pattern.validate(rlft);
  const int n = rlft.node_count();
  Roles roles;
  roles.per_node.assign(static_cast<std::size_t>(n), Role{});
  if (pattern.kind == PatternKind::uniform) return roles;

  if (pattern.kind == PatternKind::hotspot) {
    const std::set<NodeId> hot(pattern.hotspots.begin(), pattern.hotspots.end());
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
      if (!hot.count(v)) pool.push_back(v);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    const int count = std::min(sender_count(pattern.fraction, n), static_cast<int>(pool.size()));
    for (int i = 0; i < count; ++i) {
      Role& r = roles.per_node[pool[static_cast<std::size_t>(i)]];
      r.kind = RoleKind::hotspot;
      r.target = pattern.hotspots[static_cast<std::size_t>(i) % pattern.hotspots.size()];
    }
    return roles;
  }

  const std::vector<Stage2Port> ports = pattern.ihs_ports.empty() ? default_ihs_ports(rlft) : pattern.ihs_ports;
  const int total = sender_count(pattern.fraction, n);
  const int per_port = total / static_cast<int>(ports.size());
  const int extra = total % static_cast<int>(ports.size());
  for (std::size_t p = 0; p < ports.size(); ++p) {
    roles.ihs_sets.push_back(ihs_destination_set(rlft, ports[p]));
    const topology::SwitchPosition pos{2, ports[p].switch_index};
    std::vector<NodeId> group;
    for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
      if (rlft.in_subtree(pos, v) && roles.per_node[v].kind == RoleKind::uniform) group.push_back(v);
    }
    std::shuffle(group.begin(), group.end(), rng);
    const int want = per_port + (static_cast<int>(p) < extra ? 1 : 0);
    const int count = std::min(want, static_cast<int>(group.size()));
    for (int i = 0; i < count; ++i) {
      Role& r = roles.per_node[group[static_cast<std::size_t>(i)]];
      r.kind = RoleKind::intermediate;
      r.port = static_cast<int>(p);
    }
  }
  return roles;
}

NodeId next_destination(NodeId src, const Role& role, const Roles& roles, int node_count, std::mt19937_64& rng) {
  switch (role.kind) {
    case RoleKind::hotspot:
      return role.target;
    case RoleKind::intermediate: {
      const auto& set = roles.ihs_sets[static_cast<std::size_t>(role.port)];
      std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
      return set[pick(rng)];
    }
    case RoleKind::uniform:
      break;
  }
  if (node_count < 2) throw TrafficError("uniform traffic needs at least two nodes");
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(node_count - 2));
  const NodeId d = pick(rng);
  return d >= src ? d + 1 : d;
}

NodeId scale_node_id(NodeId reference_id, int node_count) {
  return static_cast<NodeId>((static_cast<std::uint64_t>(reference_id) * static_cast<std::uint64_t>(node_count)) /
                             kReferenceNodes);
}

std::vector<NodeId> reference_hotspots(int node_count) {
  std::vector<NodeId> out;
  for (NodeId id : kReferenceHotspots) out.push_back(scale_node_id(id, node_count));
  return out;
}

TrafficPattern named_scenario(const std::string& name, const topology::Rlft& rlft, double load) {
  TrafficPattern p;
  p.load = load;
  const std::vector<NodeId> hot = reference_hotspots(rlft.node_count());
  if (name == "uniform") {
    p.kind = PatternKind::uniform;
  } else if (name == "HS10-1" || name == "HS25-1" || name == "HS10-4" || name == "HS25-4") {
    p.kind = PatternKind::hotspot;
    p.fraction = name.substr(2, 2) == "10" ? 0.10 : 0.25;
    p.hotspots = name.back() == '1' ? std::vector<NodeId>{hot.front()} : hot;
  } else if (name == "IHS") {
    p.kind = PatternKind::intermediate_hotspot;
    p.fraction = 0.20;
  } else {
    throw TrafficError("unknown scenario '" + name + "'");
  }
  p.validate(rlft);
  return p;
}

InjectionProcess::InjectionProcess(double serialization_ns, double load) {
  if (load < 0.0 || load > 1.0) throw TrafficError("offered load must lie in [0,1]");
  mean_gap_ns_ = load > 0.0 ? serialization_ns / load : 0.0;
}

double InjectionProcess::next_gap(std::mt19937_64& rng) const {
  return -mean_gap_ns_ * std::log1p(-uniform01(rng));
}

}  // namespace ftsim::traffic
