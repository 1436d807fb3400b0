#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ftsim/types.hpp"

namespace ftsim::topology {

inline constexpr std::int64_t kDefaultNodeLimit = 65536;

struct RlftParams {
  int ports = 4;   // P, must be even
  int stages = 2;  // T >= 1
  std::int64_t node_limit = kDefaultNodeLimit;

  int arity() const { return ports / 2; }
  void validate() const;

  friend bool operator==(const RlftParams&, const RlftParams&) = default;
};

struct SwitchPosition {
  int stage = 1;  // 1..T
  int index = 0;  // left-to-right within the stage

  friend auto operator<=>(const SwitchPosition&, const SwitchPosition&) = default;
};

std::string to_string(const SwitchPosition& pos);

enum class PeerKind : std::uint8_t { none, node, sw };

// One side of a link. For a node, `id` is the node id and `port` is 0.
// For a switch, `id` is the global switch id.
struct Endpoint {
  PeerKind kind = PeerKind::none;
  int id = -1;
  int port = -1;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

enum class LinkDirection : std::uint8_t { up, down };

// A full-duplex cable. `lower -> upper` is the upward direction.
struct Link {
  Endpoint lower;
  Endpoint upper;

  friend bool operator==(const Link&, const Link&) = default;
};

// One switch traversal of a route: the switch and the output port taken.
struct Hop {
  SwitchPosition sw;
  PortIndex out_port = 0;

  friend bool operator==(const Hop&, const Hop&) = default;
};

using Path = std::vector<Hop>;

// A Real-Life Fat-Tree built from equal-radix switches.
//
// Switch numbering: global ids run stage by stage, left to right, starting at
// stage 1. Stages 1..T-1 hold 2K^(T-1) switches each; the top stage holds
// K^(T-1). At a non-top switch, ports 0..K-1 face down and K..2K-1 face up.
// Top-stage switches use all 2K ports downward.
//
// A non-top switch index i is split as i = h * K^(T-1) + w, where h selects one
// of two halves and w is a (T-1)-digit base-K label. The stage-t upward port j
// leads to the stage-(t+1) switch whose label equals w with digit t-1 replaced
// by j. Top switches are labelled by w alone and serve both halves.
class Rlft {
 public:
  explicit Rlft(const RlftParams& params);

  const RlftParams& params() const { return params_; }
  int arity() const { return k_; }
  int stages() const { return t_; }
  int ports() const { return 2 * k_; }
  int node_count() const { return n_; }
  int switch_count() const { return s_; }

  int switches_in_stage(int stage) const;
  int first_switch_id(int stage) const;
  int switch_id(const SwitchPosition& pos) const;
  SwitchPosition position(int switch_id) const;
  bool is_top(int stage) const { return stage == t_; }

  // Peer reached through `port` of switch `switch_id`.
  const Endpoint& peer(int switch_id, PortIndex port) const;
  // The stage-1 switch port an end-node plugs into.
  Endpoint attachment(NodeId node) const;
  // Stage-1 switch index (within stage 1) hosting `node`.
  int leaf_switch(NodeId node) const;

  // True when `node` lies below the switch at `pos`.
  bool in_subtree(const SwitchPosition& pos, NodeId node) const;

  // Stage of the lowest switch level from which both nodes are reachable.
  int common_ancestor_stage(NodeId a, NodeId b) const;

  // Base-K digit `pos` of the node id (digit 0 is least significant).
  int digit(NodeId node, int pos) const;

  const std::vector<Link>& links() const { return links_; }

  void validate_node(NodeId node) const;

 private:
  void wire();
  void connect(Endpoint lower, Endpoint upper);

  RlftParams params_;
  int k_ = 0;
  int t_ = 0;
  int n_ = 0;
  int s_ = 0;
  int half_ = 0;   // K^T, nodes per half
  int label_ = 0;  // K^(T-1), switches per half per non-top stage
  std::vector<int> pow_k_;
  std::vector<Endpoint> peers_;  // switch_count * ports
  std::vector<Link> links_;
};

Rlft build_rlft(const RlftParams& params);

// All up*-turnaround-down* shortest paths between two distinct end-nodes,
// in lexicographic order of the upward port choices.
std::vector<Path> enumerate_shortest_paths(const Rlft& rlft, NodeId src, NodeId dst);

// `sw(stage,idx):outport` hops separated by spaces.
std::string format_path(const Path& path);

}  // namespace ftsim::topology
