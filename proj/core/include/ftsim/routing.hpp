#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ftsim/topology.hpp"
#include "ftsim/types.hpp"

namespace ftsim::routing {

enum class Mode : std::uint8_t { deterministic, oblivious, adaptive };
enum class Triggering : std::uint8_t { none, one_threshold, two_thresholds };

// Stage(s) where adaptive selection may deviate from D-mod-K.
// `only_stage == 0` means every stage.
struct StageRestriction {
  int only_stage = 0;

  bool all() const { return only_stage == 0; }
  bool permits(int stage) const { return only_stage == 0 || only_stage == stage; }

  friend bool operator==(const StageRestriction&, const StageRestriction&) = default;
};

struct RoutingConfig {
  Mode mode = Mode::deterministic;
  Triggering triggering = Triggering::none;
  int ltth = 0;  // free-credit count
  int htth = 0;  // free-credit count
  StageRestriction stages;
  int delta = 1;

  // Checks the config against the topology shape and a per-VC credit capacity.
  void validate(int arity, int stages, int vc_capacity) const;

  friend bool operator==(const RoutingConfig&, const RoutingConfig&) = default;
};

std::string to_string(Mode mode);
std::string to_string(Triggering trig);

// Canonical short name, e.g. `DMODK`, `OBLIV`, `ADAP-2TH-1S-Kd3`.
std::string config_id(const RoutingConfig& cfg);
// Inverse of config_id. Thresholds are left at zero; callers fill them in.
RoutingConfig parse_config_id(const std::string& id);

// Free credits per (upward port index, VC) for the next-hop input buffers.
struct CreditView {
  std::span<const int> free;  // indexed [up * vcs + vc]
  int vcs = 1;
  int capacity = 0;

  int at(int up, VcIndex vc) const { return free[static_cast<std::size_t>(up) * vcs + vc]; }
};

// PortCongested bits, one per (upward port index, VC).
class CongestionFlags {
 public:
  CongestionFlags() = default;
  CongestionFlags(int up_ports, int vcs)
      : vcs_(vcs), bits_(static_cast<std::size_t>(up_ports) * vcs, 0) {}

  bool get(int up, VcIndex vc) const { return bits_[index(up, vc)] != 0; }
  void set(int up, VcIndex vc, bool value) { bits_[index(up, vc)] = value ? 1 : 0; }
  bool any() const;

 private:
  std::size_t index(int up, VcIndex vc) const { return static_cast<std::size_t>(up) * vcs_ + vc; }

  int vcs_ = 1;
  std::vector<std::uint8_t> bits_;
};

// Upward port index (0..K-1) chosen by D-mod-K at `pos`: digit stage-1 of dst.
int dmodk_up_port(const topology::Rlft& rlft, const topology::SwitchPosition& pos, NodeId dst);

// The unique downward port at `pos` towards dst.
PortIndex down_port(const topology::Rlft& rlft, const topology::SwitchPosition& pos, NodeId dst);

// Upward port indices whose index mod delta equals key mod delta, ascending.
// delta == 1 returns all K ports.
std::vector<int> candidate_ports(std::uint64_t key, int arity, int delta);

// Restricted adaptive path selection for the upward phase. Returns an upward
// port index. Updates `flags` in the two-threshold mode.
//
// The K/delta filter is keyed on the destination digit D-mod-K uses at this
// stage, so the D-mod-K port is always a candidate.
int restricted_path_selection(const topology::Rlft& rlft, const topology::SwitchPosition& pos,
                              NodeId dst, VcIndex vc, const RoutingConfig& cfg,
                              const CreditView& credits, CongestionFlags& flags);

// Uniform choice over the K upward ports.
int oblivious_port(int arity, std::mt19937_64& rng);

// Every upward port index the selection function could return for this
// (switch, destination), over all credit states. Sorted ascending.
std::vector<int> allowed_up_ports(const topology::Rlft& rlft, const topology::SwitchPosition& pos,
                                  NodeId dst, const RoutingConfig& cfg);

}  // namespace ftsim::routing
