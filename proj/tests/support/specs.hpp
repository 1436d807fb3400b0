#pragma once

// Run specifications shared by the engine tests and the acceptance suite.

#include <string>

#include "ftsim/config.hpp"
#include "ftsim/sim_config.hpp"
#include "ftsim/topology.hpp"
#include "ftsim/traffic.hpp"

namespace specs {

struct Desk {
  int ports = 8;
  int stages = 3;
  std::string routing = "DMODK";
  std::string scheme = "1q";
  int vcs = 1;
  bool voq = false;
  std::string scenario = "uniform";
  double load = 1.0;
  ftsim::TimeNs duration_ns = 3'000'000;
  ftsim::TimeNs warmup_ns = 1'000'000;
  std::uint64_t seed = 1;
};

inline ftsim::engine::RunSpec make(const Desk& d) {
  using namespace ftsim;
  engine::RunSpec spec;
  spec.topology = topology::RlftParams{d.ports, d.stages};
  spec.queuing = queuing::QueueScheme{queuing::parse_scheme(d.scheme), d.vcs};
  spec.sw.voq = d.voq;
  const int cap = spec.sw.vc_capacity(d.vcs);
  spec.routing = routing::parse_config_id(d.routing);
  if (spec.routing.mode == routing::Mode::adaptive) {
    spec.routing.ltth = harness::threshold_credits(0.25, cap);
    spec.routing.htth = harness::threshold_credits(0.50, cap);
  }
  const topology::Rlft rlft(spec.topology);
  spec.traffic = traffic::named_scenario(d.scenario, rlft, d.load);
  spec.sim.duration_ns = d.duration_ns;
  spec.sim.warmup_ns = d.warmup_ns;
  spec.sim.seed = d.seed;
  return spec;
}

}  // namespace specs
