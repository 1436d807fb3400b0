#include "ftsim/simulator.hpp"

#include <cmath>
#include <string>

#include "ftsim/error.hpp"
#include "ftsim/event_queue.hpp"
#include "ftsim/queuing.hpp"
#include "ftsim/routing.hpp"
#include "ftsim/switch.hpp"

namespace ftsim::engine {

namespace {

using switching::PacketHandle;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// End-node interface: one injection queue per VC, credits towards the leaf
// switch, and the node's Poisson generator. The generator never waits on a
// full queue, so a blocked VC does not throttle the node's other VCs.
struct Nic {
  std::vector<switching::RingQueue> queues;
  std::vector<int> credits;
  int vc_pointer = 0;
  int queued = 0;
  std::mt19937_64 rng;
  double next_arrival = 0.0;
  bool active = true;
};

}  // namespace

struct Simulator::Impl {
  RunSpec spec;
  topology::Rlft rlft;
  int k = 0;
  int p = 0;
  int q = 0;
  int s = 0;
  int n = 0;
  int cap = 0;
  TimeNs ser = 0;
  TimeNs prop = 0;
  TimeNs window = 0;

  switching::PacketPool pool;
  std::vector<switching::SwitchState> switches;
  std::vector<topology::SwitchPosition> positions;
  std::vector<topology::Endpoint> peers;     // [sw * P + port]
  std::vector<topology::Endpoint> attached;  // [node]
  std::vector<std::mt19937_64> switch_rng;
  std::vector<Nic> nics;
  traffic::Roles roles;
  traffic::InjectionProcess injection;

  // Per directed link and VC: switch outputs at [sw * P + port], end-node
  // uplinks at [S * P + node].
  std::vector<int> packets_in_flight;
  std::vector<int> credits_in_flight;

  EventQueue events;
  MetricsSeries metrics;
  std::int64_t injected = 0;
  std::int64_t refused = 0;
  std::int64_t delivered = 0;
  std::uint64_t next_packet_id = 0;
  std::int64_t bin_delivered = 0;
  std::int64_t bin_injected = 0;
  TimeNs bin_start = 0;
  std::int64_t progress_delivered = 0;
  std::int64_t progress_outstanding = 0;
  bool ran = false;
  HopObserver observer;

  void observe(HopRecord::Kind kind, TimeNs t, PacketHandle h, int sw, PortIndex port, NodeId node) {
    if (observer) observer({kind, t, pool[h].id, sw, port, node});
  }

  explicit Impl(const RunSpec& rs);

  std::size_t slot(std::size_t link, VcIndex vc) const { return link * static_cast<std::size_t>(q) + vc; }
  std::size_t switch_link(int sw, PortIndex port) const {
    return static_cast<std::size_t>(sw) * static_cast<std::size_t>(p) + static_cast<std::size_t>(port);
  }
  std::size_t node_link(NodeId node) const { return static_cast<std::size_t>(s) * p + node; }
  // The link feeding input `port` of switch `sw`.
  const topology::Endpoint& peer(int sw, PortIndex port) const { return peers[switch_link(sw, port)]; }
  std::size_t upstream_link(int sw, PortIndex port) const {
    const topology::Endpoint& e = peer(sw, port);
    return e.kind == topology::PeerKind::node ? node_link(static_cast<NodeId>(e.id)) : switch_link(e.id, e.port);
  }

  PortIndex route(int sw, switching::SwitchState& state, const switching::Packet& pkt);
  void on_switch_arrival(int sw, PortIndex in_port, PacketHandle h);
  void on_node_arrival(NodeId node, PacketHandle h);
  void on_switch_credit(int sw, PortIndex port, VcIndex vc);
  void on_node_credit(NodeId node, VcIndex vc);
  void on_epoch(TimeNs t);
  void on_injection(NodeId node, TimeNs t);
  void on_metrics_tick(TimeNs t);
  void on_progress_check(TimeNs t);
  void send_from_switch(int sw, const switching::Transfer& tr, TimeNs t);
  void send_from_nic(NodeId node, TimeNs t);
  void enqueue_at_nic(NodeId node, const switching::Packet& pkt);
  void schedule_injection(NodeId node);
  void audit() const;
  MetricsSeries run();
};

Simulator::Impl::Impl(const RunSpec& rs)
    : spec(rs), rlft((rs.topology.validate(), rs.topology)), injection(1.0, 0.0) {
  spec.queuing.validate();
  spec.sw.validate(spec.queuing.vcs);
  spec.sim.validate();
  k = rlft.arity();
  p = rlft.ports();
  q = spec.queuing.vcs;
  s = rlft.switch_count();
  n = rlft.node_count();
  cap = spec.sw.vc_capacity(q);
  spec.routing.validate(k, rlft.stages(), cap);
  spec.traffic.validate(rlft);
  ser = engine::serialization_ns(spec.sw.mtu_bytes, spec.sim.link_bandwidth_gbps);
  prop = spec.sim.propagation_ns;
  window = 10 * 2 * rlft.stages() * (2 * ser + prop);
  injection = traffic::InjectionProcess(static_cast<double>(ser), spec.traffic.load);

  switching::SwitchParams sp;
  sp.ports = p;
  sp.vcs = q;
  sp.vc_capacity = cap;
  sp.voq = spec.sw.voq;
  switches.reserve(static_cast<std::size_t>(s));
  for (int sw = 0; sw < s; ++sw) {
    positions.push_back(rlft.position(sw));
    for (PortIndex port = 0; port < p; ++port) peers.push_back(rlft.peer(sw, port));
    switch_rng.emplace_back(stream_seed(spec.sim.seed, static_cast<std::uint64_t>(n) + sw));
    switches.emplace_back(sp, [this, sw](switching::SwitchState& st, const switching::Packet& pkt) {
      return route(sw, st, pkt);
    });
    switches.back().init_flags(k);
  }

  nics.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    Nic& nic = nics[static_cast<std::size_t>(v)];
    nic.queues.assign(static_cast<std::size_t>(q), switching::RingQueue(cap));
    nic.credits.assign(static_cast<std::size_t>(q), cap);
    attached.push_back(rlft.attachment(static_cast<NodeId>(v)));
    nic.rng.seed(stream_seed(spec.sim.seed, static_cast<std::uint64_t>(v)));
  }

  std::mt19937_64 role_rng(stream_seed(spec.sim.seed, static_cast<std::uint64_t>(n) + s + 1));
  roles = traffic::assign_roles(spec.traffic, rlft, role_rng);

  const std::size_t links = static_cast<std::size_t>(s) * p + static_cast<std::size_t>(n);
  packets_in_flight.assign(links * static_cast<std::size_t>(q), 0);
  credits_in_flight.assign(links * static_cast<std::size_t>(q), 0);
}

PortIndex Simulator::Impl::route(int sw, switching::SwitchState& state, const switching::Packet& pkt) {
  const topology::SwitchPosition& pos = positions[static_cast<std::size_t>(sw)];
  if (rlft.is_top(pos.stage) || rlft.in_subtree(pos, pkt.dst)) return routing::down_port(rlft, pos, pkt.dst);
  int up = 0;
  switch (spec.routing.mode) {
    case routing::Mode::deterministic:
      up = routing::dmodk_up_port(rlft, pos, pkt.dst);
      break;
    case routing::Mode::oblivious:
      up = routing::oblivious_port(k, switch_rng[static_cast<std::size_t>(sw)]);
      break;
    case routing::Mode::adaptive:
      up = routing::restricted_path_selection(rlft, pos, pkt.dst, pkt.vc, spec.routing, state.credit_view(k, k),
                                              state.flags());
      break;
  }
  return k + up;
}

void Simulator::Impl::on_switch_arrival(int sw, PortIndex in_port, PacketHandle h) {
  --packets_in_flight[slot(upstream_link(sw, in_port), pool[h].vc)];
  observe(HopRecord::Kind::arrive, events.now(), h, sw, in_port, 0);
  switches[static_cast<std::size_t>(sw)].on_packet_arrival(in_port, h, pool);
}

void Simulator::Impl::on_node_arrival(NodeId node, PacketHandle h) {
  const topology::Endpoint& at = attached[node];
  const switching::Packet& pkt = pool[h];
  if (pkt.dst != node) {
    throw SimulationError("packet " + std::to_string(pkt.id) + " for node " + std::to_string(pkt.dst) +
                          " delivered to node " + std::to_string(node));
  }
  observe(HopRecord::Kind::arrive, events.now(), h, -1, 0, node);
  const std::size_t link = switch_link(at.id, at.port);
  --packets_in_flight[slot(link, pkt.vc)];
  ++credits_in_flight[slot(link, pkt.vc)];
  events.push(events.now() + prop, EventKind::credit_return, Target::sw, static_cast<std::uint32_t>(at.id),
              static_cast<std::uint32_t>(at.port), static_cast<std::uint32_t>(pkt.vc));
  ++delivered;
  bin_delivered += pkt.size_bytes;
  if (pkt.injected_at >= spec.sim.warmup_ns) {
    metrics.steady_latency_sum_ns += events.now() - pkt.injected_at;
    ++metrics.steady_deliveries;
  }
  pool.release(h);
}

void Simulator::Impl::on_switch_credit(int sw, PortIndex port, VcIndex vc) {
  --credits_in_flight[slot(switch_link(sw, port), vc)];
  switches[static_cast<std::size_t>(sw)].on_credit_return(port, vc);
}

void Simulator::Impl::on_node_credit(NodeId node, VcIndex vc) {
  --credits_in_flight[slot(node_link(node), vc)];
  int& c = nics[node].credits[static_cast<std::size_t>(vc)];
  if (c >= cap) throw FlowControlError("credit overflow at node " + std::to_string(node));
  ++c;
}

void Simulator::Impl::send_from_switch(int sw, const switching::Transfer& tr, TimeNs t) {
  const VcIndex vc = pool[tr.packet].vc;
  observe(HopRecord::Kind::send, t, tr.packet, sw, tr.out_port, 0);
  ++packets_in_flight[slot(switch_link(sw, tr.out_port), vc)];
  const topology::Endpoint& down = peer(sw, tr.out_port);
  if (down.kind == topology::PeerKind::node) {
    events.push(t + ser + prop, EventKind::link_arrival, Target::node, static_cast<std::uint32_t>(down.id), 0,
                tr.packet);
  } else {
    events.push(t + ser + prop, EventKind::link_arrival, Target::sw, static_cast<std::uint32_t>(down.id),
                static_cast<std::uint32_t>(down.port), tr.packet);
  }
  // The input slot just freed goes back to whoever feeds it.
  const topology::Endpoint& up = peer(sw, tr.in_port);
  ++credits_in_flight[slot(upstream_link(sw, tr.in_port), vc)];
  if (up.kind == topology::PeerKind::node) {
    events.push(t + prop, EventKind::credit_return, Target::node, static_cast<std::uint32_t>(up.id), 0,
                static_cast<std::uint32_t>(vc));
  } else {
    events.push(t + prop, EventKind::credit_return, Target::sw, static_cast<std::uint32_t>(up.id),
                static_cast<std::uint32_t>(up.port), static_cast<std::uint32_t>(vc));
  }
}

void Simulator::Impl::send_from_nic(NodeId node, TimeNs t) {
  Nic& nic = nics[node];
  for (int step = 0; step < q; ++step) {
    const VcIndex vc = (nic.vc_pointer + step) % q;
    auto& queue = nic.queues[static_cast<std::size_t>(vc)];
    if (queue.empty() || nic.credits[static_cast<std::size_t>(vc)] <= 0) continue;
    const PacketHandle h = queue.pop();
    --nic.queued;
    --nic.credits[static_cast<std::size_t>(vc)];
    nic.vc_pointer = (vc + 1) % q;
    observe(HopRecord::Kind::send, t, h, -1, 0, node);
    ++packets_in_flight[slot(node_link(node), vc)];
    const topology::Endpoint& at = attached[node];
    events.push(t + ser + prop, EventKind::link_arrival, Target::sw, static_cast<std::uint32_t>(at.id),
                static_cast<std::uint32_t>(at.port), h);
    return;
  }
}

void Simulator::Impl::enqueue_at_nic(NodeId node, const switching::Packet& pkt) {
  Nic& nic = nics[node];
  nic.queues[static_cast<std::size_t>(pkt.vc)].push(pool.acquire(pkt));
  ++nic.queued;
  ++injected;
  bin_injected += pkt.size_bytes;
}

void Simulator::Impl::schedule_injection(NodeId node) {
  Nic& nic = nics[node];
  nic.next_arrival += injection.next_gap(nic.rng);
  const auto t = static_cast<TimeNs>(std::ceil(nic.next_arrival));
  if (t < spec.sim.duration_ns) events.push(t, EventKind::injection, Target::node, node);
}

void Simulator::Impl::on_injection(NodeId node, TimeNs t) {
  Nic& nic = nics[node];
  switching::Packet pkt;
  pkt.id = next_packet_id++;
  pkt.src = node;
  pkt.dst = traffic::next_destination(node, roles.per_node[node], roles, n, nic.rng);
  pkt.vc = queuing::map_to_vc(spec.queuing, node, pkt.dst, rlft);
  pkt.size_bytes = spec.sw.mtu_bytes;
  pkt.injected_at = t;
  if (nic.queues[static_cast<std::size_t>(pkt.vc)].full()) {
    ++refused;
  } else {
    enqueue_at_nic(node, pkt);
  }
  schedule_injection(node);
}

void Simulator::Impl::on_epoch(TimeNs t) {
  for (int sw = 0; sw < s; ++sw) {
    switching::SwitchState& state = switches[static_cast<std::size_t>(sw)];
    if (state.resident() == 0) continue;
    for (const switching::Transfer& tr : state.arbitrate(pool)) send_from_switch(sw, tr, t);
  }
  for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
    if (nics[v].queued > 0) send_from_nic(v, t);
  }
  if (t + ser < spec.sim.duration_ns) events.push(t + ser, EventKind::arbitration_epoch);
}

void Simulator::Impl::on_metrics_tick(TimeNs t) {
  metrics.bins.push_back({bin_start, bin_delivered, bin_injected});
  bin_start = t;
  bin_delivered = 0;
  bin_injected = 0;
  if (t + spec.sim.metrics_bin_ns < spec.sim.duration_ns) {
    events.push(t + spec.sim.metrics_bin_ns, EventKind::metrics_tick);
  }
}

void Simulator::Impl::on_progress_check(TimeNs t) {
  const std::int64_t outstanding = injected - delivered;
  if (progress_outstanding > 0 && delivered == progress_delivered) {
    throw SimulationError("no packet delivered between t=" + std::to_string(t - window) + " and t=" +
                          std::to_string(t) + " ns with " + std::to_string(outstanding) +
                          " packets outstanding (deadlock)");
  }
  progress_delivered = delivered;
  progress_outstanding = outstanding;
  if (t + window < spec.sim.duration_ns) events.push(t + window, EventKind::progress_check);
}

void Simulator::Impl::audit() const {
  const auto fail = [](const std::string& where, VcIndex vc, int got, int want) {
    throw SimulationError("credit conservation broken on " + where + " vc " + std::to_string(vc) + ": " +
                          std::to_string(got) + " != " + std::to_string(want));
  };
  std::int64_t resident = 0;
  std::int64_t on_links = 0;
  for (int sw = 0; sw < s; ++sw) {
    const switching::SwitchState& state = switches[static_cast<std::size_t>(sw)];
    resident += state.resident();
    for (PortIndex port = 0; port < p; ++port) {
      const topology::Endpoint& down = peer(sw, port);
      if (down.kind == topology::PeerKind::none) continue;
      const std::size_t link = switch_link(sw, port);
      for (VcIndex vc = 0; vc < q; ++vc) {
        const int in_flight = packets_in_flight[slot(link, vc)];
        on_links += in_flight;
        const int held = down.kind == topology::PeerKind::sw
                             ? switches[static_cast<std::size_t>(down.id)].occupancy(down.port, vc)
                             : 0;
        const int total = state.credits(port, vc) + in_flight + credits_in_flight[slot(link, vc)] + held;
        if (total != cap) fail(topology::to_string(positions[static_cast<std::size_t>(sw)]) + " port " +
                               std::to_string(port), vc, total, cap);
      }
    }
  }
  std::int64_t queued = 0;
  for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
    const Nic& nic = nics[v];
    queued += nic.queued;
    const topology::Endpoint& at = attached[v];
    for (VcIndex vc = 0; vc < q; ++vc) {
      const int in_flight = packets_in_flight[slot(node_link(v), vc)];
      on_links += in_flight;
      const int total = nic.credits[static_cast<std::size_t>(vc)] + in_flight +
                        credits_in_flight[slot(node_link(v), vc)] +
                        switches[static_cast<std::size_t>(at.id)].occupancy(at.port, vc);
      if (total != cap) fail("node " + std::to_string(v) + " uplink", vc, total, cap);
    }
  }
  const std::int64_t accounted = delivered + queued + resident + on_links;
  if (accounted != injected || static_cast<std::int64_t>(pool.live()) != queued + resident + on_links) {
    throw SimulationError("packet conservation broken: injected " + std::to_string(injected) + ", delivered " +
                          std::to_string(delivered) + ", queued " + std::to_string(queued) + ", resident " +
                          std::to_string(resident) + ", on links " + std::to_string(on_links));
  }
}

MetricsSeries Simulator::Impl::run() {
  if (ran) throw SimulationError("a Simulator runs once");
  ran = true;
  const SimConfig& sim = spec.sim;
  metrics.bin_ns = sim.metrics_bin_ns;
  metrics.warmup_ns = sim.warmup_ns;
  metrics.duration_ns = sim.duration_ns;
  metrics.node_count = n;
  metrics.link_bandwidth_gbps = sim.link_bandwidth_gbps;

  events.push(0, EventKind::arbitration_epoch);
  if (injection.active()) {
    for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
      if (nics[v].active) schedule_injection(v);
    }
  }
  if (sim.metrics_bin_ns < sim.duration_ns) events.push(sim.metrics_bin_ns, EventKind::metrics_tick);
  if (sim.audit_interval_ns > 0 && sim.audit_interval_ns < sim.duration_ns) {
    events.push(sim.audit_interval_ns, EventKind::audit);
  }
  if (window < sim.duration_ns) events.push(window, EventKind::progress_check);

  while (!events.empty() && events.next_time() < sim.duration_ns) {
    const Event e = events.pop();
    switch (e.kind) {
      case EventKind::link_arrival:
        if (e.target == Target::sw) {
          on_switch_arrival(static_cast<int>(e.a), static_cast<PortIndex>(e.b), e.c);
        } else {
          on_node_arrival(e.a, e.c);
        }
        break;
      case EventKind::credit_return:
        if (e.target == Target::sw) {
          on_switch_credit(static_cast<int>(e.a), static_cast<PortIndex>(e.b), static_cast<VcIndex>(e.c));
        } else {
          on_node_credit(e.a, static_cast<VcIndex>(e.c));
        }
        break;
      case EventKind::arbitration_epoch:
        on_epoch(e.time);
        break;
      case EventKind::injection:
        on_injection(e.a, e.time);
        break;
      case EventKind::metrics_tick:
        on_metrics_tick(e.time);
        break;
      case EventKind::audit:
        audit();
        ++metrics.audits;
        if (e.time + sim.audit_interval_ns < sim.duration_ns) {
          events.push(e.time + sim.audit_interval_ns, EventKind::audit);
        }
        break;
      case EventKind::progress_check:
        on_progress_check(e.time);
        break;
    }
  }
  audit();
  ++metrics.audits;
  metrics.bins.push_back({bin_start, bin_delivered, bin_injected});
  metrics.injected_packets = injected;
  metrics.refused_packets = refused;
  metrics.delivered_packets = delivered;
  return metrics;
}

Simulator::Simulator(const RunSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}
Simulator::~Simulator() = default;

void Simulator::set_roles(traffic::Roles roles) {
  if (roles.per_node.size() != static_cast<std::size_t>(impl_->n)) {
    throw TrafficError("role list size does not match the node count");
  }
  impl_->roles = std::move(roles);
}

void Simulator::set_active_sources(std::vector<bool> active) {
  if (active.size() != static_cast<std::size_t>(impl_->n)) {
    throw TrafficError("active-source list size does not match the node count");
  }
  for (std::size_t v = 0; v < active.size(); ++v) impl_->nics[v].active = active[v];
}

void Simulator::set_hop_observer(HopObserver observer) { impl_->observer = std::move(observer); }

MetricsSeries Simulator::run() { return impl_->run(); }
void Simulator::audit() const { impl_->audit(); }
const topology::Rlft& Simulator::topology() const { return impl_->rlft; }
TimeNs Simulator::serialization_ns() const { return impl_->ser; }
int Simulator::vc_capacity() const { return impl_->cap; }
TimeNs Simulator::liveness_window_ns() const { return impl_->window; }

MetricsSeries run(const RunSpec& spec) {
  Simulator sim(spec);
  return sim.run();
}

}  // namespace ftsim::engine
