#pragma once

#include <cstdint>
#include <string>

#include "ftsim/topology.hpp"
#include "ftsim/types.hpp"

namespace ftsim::queuing {

enum class Scheme : std::uint8_t { one_queue, dbbm, vftree, flow2sl };

struct QueueScheme {
  Scheme variant = Scheme::one_queue;
  int vcs = 1;

  void validate() const;

  friend bool operator==(const QueueScheme&, const QueueScheme&) = default;
};

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

// `1Q`, `DBBM3`, `VFTREE3`, `FLOW2SL3`.
std::string scheme_id(const QueueScheme& scheme);

// Static VC assigned to a packet at injection. Carried unchanged end to end.
VcIndex map_to_vc(const QueueScheme& scheme, NodeId src, NodeId dst, const topology::Rlft& rlft);

}  // namespace ftsim::queuing
