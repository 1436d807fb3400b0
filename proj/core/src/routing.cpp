#include "ftsim/routing.hpp"

#include <algorithm>

#include "ftsim/error.hpp"

namespace ftsim::routing {

void RoutingConfig::validate(int arity, int stage_count, int vc_capacity) const {
  if (delta < 1 || delta > arity) {
    throw RoutingError("delta must lie in 1.." + std::to_string(arity) + ", got " +
                       std::to_string(delta));
  }
  if (delta > 1 && arity % delta != 0) {
    throw RoutingError("delta " + std::to_string(delta) + " does not divide arity " +
                       std::to_string(arity));
  }
  if (stages.only_stage < 0 || stages.only_stage > stage_count) {
    throw RoutingError("stage restriction " + std::to_string(stages.only_stage) +
                       " outside 1.." + std::to_string(stage_count));
  }
  if (mode != Mode::adaptive) return;
  if (triggering != Triggering::none) {
    if (ltth <= 0 || ltth > vc_capacity) {
      throw RoutingError("ltth must lie in 1.." + std::to_string(vc_capacity) + ", got " +
                         std::to_string(ltth));
    }
  }
  if (triggering == Triggering::two_thresholds) {
    if (htth <= ltth || htth > vc_capacity) {
      throw RoutingError("htth must lie in " + std::to_string(ltth + 1) + ".." +
                         std::to_string(vc_capacity) + ", got " + std::to_string(htth));
    }
  }
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::deterministic: return "deterministic";
    case Mode::oblivious: return "oblivious";
    case Mode::adaptive: return "adaptive";
  }
  return "?";
}

std::string to_string(Triggering trig) {
  switch (trig) {
    case Triggering::none: return "NoTH";
    case Triggering::one_threshold: return "TH";
    case Triggering::two_thresholds: return "2TH";
  }
  return "?";
}

std::string config_id(const RoutingConfig& cfg) {
  switch (cfg.mode) {
    case Mode::deterministic: return "DMODK";
    case Mode::oblivious: return "OBLIV";
    case Mode::adaptive: break;
  }
  std::string id = "ADAP-";
  switch (cfg.triggering) {
    case Triggering::none: id += "NOTH"; break;
    case Triggering::one_threshold: id += "TH"; break;
    case Triggering::two_thresholds: id += "2TH"; break;
  }
  id += cfg.stages.all() ? "-AS" : "-" + std::to_string(cfg.stages.only_stage) + "S";
  id += cfg.delta == 1 ? "-K" : "-Kd" + std::to_string(cfg.delta);
  return id;
}

RoutingConfig parse_config_id(const std::string& id) {
  RoutingConfig cfg;
  if (id == "DMODK") return cfg;
  if (id == "OBLIV") {
    cfg.mode = Mode::oblivious;
    return cfg;
  }
  auto fail = [&] { return RoutingError("malformed routing id '" + id + "'"); };
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dash = id.find('-', start);
    parts.push_back(id.substr(start, dash - start));
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  if (parts.size() != 4 || parts[0] != "ADAP") throw fail();
  cfg.mode = Mode::adaptive;
  if (parts[1] == "NOTH") {
    cfg.triggering = Triggering::none;
  } else if (parts[1] == "TH") {
    cfg.triggering = Triggering::one_threshold;
  } else if (parts[1] == "2TH") {
    cfg.triggering = Triggering::two_thresholds;
  } else {
    throw fail();
  }
  if (parts[2] == "AS") {
    cfg.stages.only_stage = 0;
  } else if (parts[2].size() >= 2 && parts[2].back() == 'S') {
    try {
      cfg.stages.only_stage = std::stoi(parts[2].substr(0, parts[2].size() - 1));
    } catch (const std::exception&) {
      throw fail();
    }
    if (cfg.stages.only_stage < 1) throw fail();
  } else {
    throw fail();
  }
  if (parts[3] == "K") {
    cfg.delta = 1;
  } else if (parts[3].rfind("Kd", 0) == 0 && parts[3].size() > 2) {
    try {
      cfg.delta = std::stoi(parts[3].substr(2));
    } catch (const std::exception&) {
      throw fail();
    }
  } else {
    throw fail();
  }
  return cfg;
}

bool CongestionFlags::any() const {
  return std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

int dmodk_up_port(const topology::Rlft& rlft, const topology::SwitchPosition& pos, NodeId dst) {
  if (pos.stage >= rlft.stages()) {
    throw RoutingError("no upward hop from top-stage switch " + topology::to_string(pos));
  }
  return rlft.digit(dst, pos.stage - 1);
}

PortIndex down_port(const topology::Rlft& rlft, const topology::SwitchPosition& pos, NodeId dst) {
  rlft.validate_node(dst);
  if (!rlft.in_subtree(pos, dst)) {
    throw RoutingError("node " + std::to_string(dst) + " is not below " + topology::to_string(pos));
  }
  if (rlft.is_top(pos.stage)) {
    const int half = static_cast<int>(dst) / (rlft.node_count() / 2);
    return half * rlft.arity() + rlft.digit(dst, rlft.stages() - 1);
  }
  return rlft.digit(dst, pos.stage - 1);
}

std::vector<int> candidate_ports(std::uint64_t key, int arity, int delta) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(arity));
  if (delta <= 1) {
    for (int j = 0; j < arity; ++j) out.push_back(j);
    return out;
  }
  const auto residue = static_cast<int>(key % static_cast<std::uint64_t>(delta));
  for (int j = residue; j < arity; j += delta) out.push_back(j);
  return out;
}

namespace {

// Max-credit scan over ports first, first + step, ... below arity. `floor` is
// the starting MaxCredits.
int scan(int first, int step, int arity, VcIndex vc, const CreditView& credits, int floor, int port) {
  int best = floor;
  for (int i = first; i < arity; i += step) {
    const int c = credits.at(i, vc);
    if (c > best) {
      best = c;
      port = i;
      if (best == credits.capacity) break;
    }
  }
  return port;
}

}  // namespace

int restricted_path_selection(const topology::Rlft& rlft, const topology::SwitchPosition& pos,
                              NodeId dst, VcIndex vc, const RoutingConfig& cfg,
                              const CreditView& credits, CongestionFlags& flags) {
  const int dmodk = dmodk_up_port(rlft, pos, dst);
  if (cfg.mode != Mode::adaptive || !cfg.stages.permits(pos.stage)) return dmodk;

  // Candidates are the ports congruent to the D-mod-K port modulo delta,
  // matching candidate_ports(dmodk, K, delta).
  const int step = cfg.delta > 1 ? cfg.delta : 1;
  const int first = dmodk % step;
  const int k = rlft.arity();
  int port = dmodk;
  switch (cfg.triggering) {
    case Triggering::none:
      port = scan(first, step, k, vc, credits, 0, port);
      break;
    case Triggering::one_threshold:
      if (credits.at(port, vc) < cfg.ltth) port = scan(first, step, k, vc, credits, cfg.ltth, port);
      break;
    case Triggering::two_thresholds:
      if (credits.at(port, vc) < cfg.ltth || flags.get(port, vc)) {
        if (credits.at(port, vc) < cfg.htth) {
          flags.set(port, vc, true);
          port = scan(first, step, k, vc, credits, cfg.ltth, port);
        } else {
          flags.set(port, vc, false);
        }
      }
      break;
  }
  return port;
}

int oblivious_port(int arity, std::mt19937_64& rng) {
  if (arity <= 1) return 0;
  std::uniform_int_distribution<int> pick(0, arity - 1);
  return pick(rng);
}

std::vector<int> allowed_up_ports(const topology::Rlft& rlft, const topology::SwitchPosition& pos,
                                  NodeId dst, const RoutingConfig& cfg) {
  const int dmodk = dmodk_up_port(rlft, pos, dst);
  switch (cfg.mode) {
    case Mode::deterministic:
      return {dmodk};
    case Mode::oblivious:
      return candidate_ports(0, rlft.arity(), 1);
    case Mode::adaptive:
      break;
  }
  if (!cfg.stages.permits(pos.stage)) return {dmodk};
  std::vector<int> ports = candidate_ports(static_cast<std::uint64_t>(dmodk), rlft.arity(), cfg.delta);
  if (std::find(ports.begin(), ports.end(), dmodk) == ports.end()) {
    ports.insert(std::upper_bound(ports.begin(), ports.end(), dmodk), dmodk);
  }
  return ports;
}

}  // namespace ftsim::routing
