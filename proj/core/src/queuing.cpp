#include "ftsim/queuing.hpp"

#include <algorithm>
#include <cctype>

#include "ftsim/error.hpp"

namespace ftsim::queuing {

void QueueScheme::validate() const {
  if (vcs < 1) throw ConfigError("queuing.vcs must be >= 1, got " + std::to_string(vcs));
  if (variant == Scheme::one_queue && vcs != 1) {
    throw ConfigError("the 1Q scheme requires exactly one VC, got " + std::to_string(vcs));
  }
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::one_queue: return "1q";
    case Scheme::dbbm: return "dbbm";
    case Scheme::vftree: return "vftree";
    case Scheme::flow2sl: return "flow2sl";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "1q" || lower == "oneq") return Scheme::one_queue;
  if (lower == "dbbm") return Scheme::dbbm;
  if (lower == "vftree") return Scheme::vftree;
  if (lower == "flow2sl") return Scheme::flow2sl;
  throw ConfigError("unknown queuing scheme '" + name + "'");
}

std::string scheme_id(const QueueScheme& scheme) {
  switch (scheme.variant) {
    case Scheme::one_queue: return "1Q";
    case Scheme::dbbm: return "DBBM" + std::to_string(scheme.vcs);
    case Scheme::vftree: return "VFTREE" + std::to_string(scheme.vcs);
    case Scheme::flow2sl: return "FLOW2SL" + std::to_string(scheme.vcs);
  }
  return "?";
}

namespace {

VcIndex diff_mod(int a, int b, int q) { return ((a - b) % q + q) % q; }

}  // namespace

VcIndex map_to_vc(const QueueScheme& scheme, NodeId src, NodeId dst, const topology::Rlft& rlft) {
  const int q = scheme.vcs;
  switch (scheme.variant) {
    case Scheme::one_queue:
      return 0;
    case Scheme::dbbm:
      return static_cast<VcIndex>(dst % static_cast<NodeId>(q));
    case Scheme::vftree:
      return diff_mod(rlft.leaf_switch(dst), rlft.leaf_switch(src), q);
    case Scheme::flow2sl: {
      const int group = (rlft.node_count() + q - 1) / q;
      return diff_mod(static_cast<int>(dst) / group, static_cast<int>(src) / group, q);
    }
  }
  return 0;
}

}  // namespace ftsim::queuing
