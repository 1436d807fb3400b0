#include "ftsim/topology.hpp"

#include <sstream>

#include "ftsim/error.hpp"

namespace ftsim::topology {

void RlftParams::validate() const {
  if (ports < 2 || ports % 2 != 0) {
    throw TopologyError("switch port count must be even and >= 2, got " + std::to_string(ports));
  }
  if (stages < 1) {
    throw TopologyError("stage count must be >= 1, got " + std::to_string(stages));
  }
  if (ports > 64) {
    throw TopologyError("switch port count above 64 is not supported");
  }
  // N = 2 K^T, computed without overflow.
  const std::int64_t k = ports / 2;
  std::int64_t n = 2;
  for (int i = 0; i < stages; ++i) {
    n *= k;
    if (n > node_limit) {
      throw TopologyError("RLFT with P=" + std::to_string(ports) + ", T=" + std::to_string(stages) +
                          " exceeds the node limit of " + std::to_string(node_limit));
    }
  }
}

std::string to_string(const SwitchPosition& pos) {
  return "sw(" + std::to_string(pos.stage) + "," + std::to_string(pos.index) + ")";
}

Rlft::Rlft(const RlftParams& params) : params_(params) {
  params_.validate();
  k_ = params_.arity();
  t_ = params_.stages;
  pow_k_.assign(t_ + 2, 1);
  for (int i = 1; i < t_ + 2; ++i) pow_k_[i] = pow_k_[i - 1] * k_;
  half_ = pow_k_[t_];
  label_ = pow_k_[t_ - 1];
  n_ = 2 * half_;
  s_ = (n_ * (2 * t_ - 1)) / (2 * k_);
  peers_.assign(static_cast<std::size_t>(s_) * ports(), Endpoint{});
  wire();
}

int Rlft::switches_in_stage(int stage) const {
  if (stage < 1 || stage > t_) throw TopologyError("stage out of range: " + std::to_string(stage));
  return stage == t_ ? label_ : 2 * label_;
}

int Rlft::first_switch_id(int stage) const {
  if (stage < 1 || stage > t_) throw TopologyError("stage out of range: " + std::to_string(stage));
  return (stage - 1) * 2 * label_;
}

int Rlft::switch_id(const SwitchPosition& pos) const {
  if (pos.index < 0 || pos.index >= switches_in_stage(pos.stage)) {
    throw TopologyError("switch index out of range: " + to_string(pos));
  }
  return first_switch_id(pos.stage) + pos.index;
}

SwitchPosition Rlft::position(int switch_id) const {
  if (switch_id < 0 || switch_id >= s_) {
    throw TopologyError("switch id out of range: " + std::to_string(switch_id));
  }
  const int stage = switch_id / (2 * label_) + 1;
  return {stage, switch_id - first_switch_id(stage)};
}

const Endpoint& Rlft::peer(int switch_id, PortIndex port) const {
  if (port < 0 || port >= ports()) throw TopologyError("port out of range: " + std::to_string(port));
  return peers_.at(static_cast<std::size_t>(switch_id) * ports() + port);
}

void Rlft::validate_node(NodeId node) const {
  if (node >= static_cast<NodeId>(n_)) {
    throw TopologyError("node id " + std::to_string(node) + " outside 0.." + std::to_string(n_ - 1));
  }
}

Endpoint Rlft::attachment(NodeId node) const {
  validate_node(node);
  if (t_ == 1) return {PeerKind::sw, 0, static_cast<int>(node)};
  return {PeerKind::sw, static_cast<int>(node) / k_, static_cast<int>(node) % k_};
}

int Rlft::leaf_switch(NodeId node) const {
  validate_node(node);
  return t_ == 1 ? 0 : static_cast<int>(node) / k_;
}

int Rlft::digit(NodeId node, int pos) const {
  return static_cast<int>((node / static_cast<NodeId>(pow_k_.at(pos))) % k_);
}

bool Rlft::in_subtree(const SwitchPosition& pos, NodeId node) const {
  if (pos.stage == t_) return true;
  const int h = pos.index / label_;
  const int w = pos.index % label_;
  const int node_half = static_cast<int>(node) / half_;
  const int local = static_cast<int>(node) % half_;
  return node_half == h && local / pow_k_[pos.stage] == w / pow_k_[pos.stage - 1];
}

int Rlft::common_ancestor_stage(NodeId a, NodeId b) const {
  validate_node(a);
  validate_node(b);
  if (static_cast<int>(a) / half_ != static_cast<int>(b) / half_) return t_;
  const int la = static_cast<int>(a) % half_;
  const int lb = static_cast<int>(b) % half_;
  for (int s = 1; s < t_; ++s) {
    if (la / pow_k_[s] == lb / pow_k_[s]) return s;
  }
  return t_;
}

void Rlft::connect(Endpoint lower, Endpoint upper) {
  if (lower.kind == PeerKind::sw) {
    peers_[static_cast<std::size_t>(lower.id) * ports() + lower.port] = upper;
  }
  peers_[static_cast<std::size_t>(upper.id) * ports() + upper.port] = lower;
  links_.push_back({lower, upper});
}

void Rlft::wire() {
  for (int node = 0; node < n_; ++node) {
    connect({PeerKind::node, node, 0}, attachment(static_cast<NodeId>(node)));
  }
  for (int stage = 1; stage < t_; ++stage) {
    const int place = pow_k_[stage - 1];
    for (int index = 0; index < 2 * label_; ++index) {
      const int h = index / label_;
      const int w = index % label_;
      const int own_digit = (w / place) % k_;
      for (int j = 0; j < k_; ++j) {
        const int next_label = w - own_digit * place + j * place;
        Endpoint upper;
        if (stage + 1 < t_) {
          upper = {PeerKind::sw, switch_id({stage + 1, h * label_ + next_label}), own_digit};
        } else {
          upper = {PeerKind::sw, switch_id({t_, next_label}), h * k_ + own_digit};
        }
        connect({PeerKind::sw, switch_id({stage, index}), k_ + j}, upper);
      }
    }
  }
}

Rlft build_rlft(const RlftParams& params) { return Rlft(params); }

namespace {

void descend(const Rlft& rlft, int sw, NodeId dst, Path& path) {
  // Exactly one downward port leads towards dst.
  for (;;) {
    const SwitchPosition pos = rlft.position(sw);
    const int down_ports = rlft.is_top(pos.stage) ? rlft.ports() : rlft.arity();
    int next = -1;
    for (int p = 0; p < down_ports; ++p) {
      const Endpoint& e = rlft.peer(sw, p);
      if (e.kind == PeerKind::node && e.id == static_cast<int>(dst)) {
        path.push_back({pos, p});
        return;
      }
      if (e.kind == PeerKind::sw && rlft.in_subtree(rlft.position(e.id), dst)) {
        path.push_back({pos, p});
        next = e.id;
        break;
      }
    }
    if (next < 0) throw TopologyError("no downward route to node " + std::to_string(dst));
    sw = next;
  }
}

void climb(const Rlft& rlft, int sw, NodeId dst, Path& path, std::vector<Path>& out) {
  const SwitchPosition pos = rlft.position(sw);
  if (rlft.in_subtree(pos, dst)) {
    Path full = path;
    descend(rlft, sw, dst, full);
    out.push_back(std::move(full));
    return;
  }
  for (int j = 0; j < rlft.arity(); ++j) {
    const int port = rlft.arity() + j;
    path.push_back({pos, port});
    climb(rlft, rlft.peer(sw, port).id, dst, path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_shortest_paths(const Rlft& rlft, NodeId src, NodeId dst) {
  rlft.validate_node(src);
  rlft.validate_node(dst);
  if (src == dst) throw TopologyError("degenerate pair: source equals destination");
  std::vector<Path> out;
  Path path;
  climb(rlft, rlft.attachment(src).id, dst, path, out);
  return out;
}

std::string format_path(const Path& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) os << ' ';
    os << to_string(path[i].sw) << ':' << path[i].out_port;
  }
  return os.str();
}

}  // namespace ftsim::topology
