#include "ftsim/switch.hpp"

#include <string>

#include "ftsim/error.hpp"

namespace ftsim::switching {

PacketHandle PacketPool::acquire(const Packet& p) {
  if (!free_.empty()) {
    const PacketHandle h = free_.back();
    free_.pop_back();
    slots_[h] = p;
    return h;
  }
  slots_.push_back(p);
  return static_cast<PacketHandle>(slots_.size() - 1);
}

void PacketPool::release(PacketHandle h) { free_.push_back(h); }

void RingQueue::push(PacketHandle h) {
  if (full()) throw FlowControlError("ring queue overflow");
  buf_[(head_ + static_cast<std::size_t>(size_)) % buf_.size()] = h;
  ++size_;
}

PacketHandle RingQueue::pop() {
  const PacketHandle h = buf_[head_];
  head_ = (head_ + 1) % buf_.size();
  --size_;
  return h;
}

SwitchState::SwitchState(const SwitchParams& params, RouteFn route)
    : params_(params), route_(std::move(route)) {
  if (params_.ports <= 0 || params_.ports > 64) throw Error("switch port count must lie in 1..64");
  if (params_.vcs <= 0 || params_.vc_capacity <= 0) throw Error("switch needs at least one VC slot");
  if (params_.islip_iterations <= 0) params_.islip_iterations = params_.ports;
  const std::size_t slots = static_cast<std::size_t>(params_.ports) * params_.vcs;
  const std::size_t nq = params_.voq ? slots * params_.ports : slots;
  queues_.assign(nq, RingQueue(params_.vc_capacity));
  voq_nonempty_.assign(slots, 0);
  occupancy_.assign(slots, 0);
  credits_.assign(slots, params_.vc_capacity);
  vc_pointer_.assign(static_cast<std::size_t>(params_.ports), 0);
  requests_.assign(static_cast<std::size_t>(params_.ports), 0);
  pointers_ = IslipPointers(params_.ports);
  flags_ = routing::CongestionFlags(params_.ports, params_.vcs);
}

PortIndex SwitchState::route(PacketHandle h, PacketPool& pool) {
  const PortIndex out = route_(*this, pool[h]);
  if (out < 0 || out >= params_.ports) {
    throw RoutingError("route function returned invalid port " + std::to_string(out));
  }
  pool[h].out_port = out;
  return out;
}

void SwitchState::on_packet_arrival(PortIndex in_port, PacketHandle h, PacketPool& pool) {
  const VcIndex vc = pool[h].vc;
  if (vc < 0 || vc >= params_.vcs) throw FlowControlError("packet VC out of range");
  int& occ = occupancy_[cidx(in_port, vc)];
  if (occ >= params_.vc_capacity) {
    throw FlowControlError("buffer overflow at input " + std::to_string(in_port) + " vc " +
                           std::to_string(vc) + ": sender ignored credits");
  }
  pool[h].out_port = -1;
  if (params_.voq) {
    const PortIndex out = route(h, pool);
    voq(in_port, vc, out).push(h);
    voq_nonempty_[cidx(in_port, vc)] |= std::uint64_t{1} << out;
  } else {
    queues_[cidx(in_port, vc)].push(h);
  }
  ++occ;
  ++resident_;
}

std::span<const std::uint64_t> SwitchState::build_requests(PacketPool& pool) {
  const int p = params_.ports;
  const int q = params_.vcs;
  if (params_.voq) {
    std::uint64_t with_credit[64];
    for (VcIndex vc = 0; vc < q; ++vc) {
      std::uint64_t m = 0;
      for (PortIndex o = 0; o < p; ++o) {
        if (credits_[cidx(o, vc)] > 0) m |= std::uint64_t{1} << o;
      }
      with_credit[vc] = m;
    }
    for (PortIndex in = 0; in < p; ++in) {
      std::uint64_t mask = 0;
      for (VcIndex vc = 0; vc < q; ++vc) mask |= voq_nonempty_[cidx(in, vc)] & with_credit[vc];
      requests_[static_cast<std::size_t>(in)] = mask;
    }
  } else {
    for (PortIndex in = 0; in < p; ++in) {
      std::uint64_t mask = 0;
      for (VcIndex vc = 0; vc < q; ++vc) {
        RingQueue& queue = queues_[cidx(in, vc)];
        if (queue.empty()) continue;
        const PacketHandle h = queue.front();
        const PortIndex out = pool[h].out_port >= 0 ? pool[h].out_port : route(h, pool);
        if (credits_[cidx(out, vc)] > 0) mask |= std::uint64_t{1} << out;
      }
      requests_[static_cast<std::size_t>(in)] = mask;
    }
  }
  return requests_;
}

Matching SwitchState::arbitrate_requests(std::span<const std::uint64_t> requests) {
  return islip_arbitrate(requests, pointers_, params_.islip_iterations);
}

const std::vector<Transfer>& SwitchState::forward_matched(const Matching& matching, PacketPool& pool) {
  transfers_.clear();
  const int q = params_.vcs;
  for (PortIndex in = 0; in < params_.ports; ++in) {
    const PortIndex out = matching.out_of_input[static_cast<std::size_t>(in)];
    if (out < 0) continue;
    bool sent = false;
    for (int step = 0; step < q && !sent; ++step) {
      const VcIndex vc = (vc_pointer_[static_cast<std::size_t>(in)] + step) % q;
      if (credits_[cidx(out, vc)] <= 0) continue;
      RingQueue* queue = nullptr;
      if (params_.voq) {
        RingQueue& v = voq(in, vc, out);
        if (!v.empty()) queue = &v;
      } else {
        RingQueue& v = queues_[cidx(in, vc)];
        if (!v.empty() && pool[v.front()].out_port == out) queue = &v;
      }
      if (!queue) continue;
      const PacketHandle h = queue->pop();
      if (params_.voq && queue->empty()) voq_nonempty_[cidx(in, vc)] &= ~(std::uint64_t{1} << out);
      --credits_[cidx(out, vc)];
      --occupancy_[cidx(in, vc)];
      --resident_;
      vc_pointer_[static_cast<std::size_t>(in)] = (vc + 1) % q;
      transfers_.push_back({in, out, vc, h});
      sent = true;
    }
    if (!sent) {
      throw FlowControlError("matched input " + std::to_string(in) + " to output " + std::to_string(out) +
                             " without an eligible packet holding a credit");
    }
  }
  return transfers_;
}

const std::vector<Transfer>& SwitchState::arbitrate(PacketPool& pool) {
  if (resident_ == 0) {
    transfers_.clear();
    return transfers_;
  }
  const auto requests = build_requests(pool);
  const Matching m = arbitrate_requests(requests);
  return forward_matched(m, pool);
}

void SwitchState::on_credit_return(PortIndex out_port, VcIndex vc) {
  int& c = credits_[cidx(out_port, vc)];
  if (c >= params_.vc_capacity) {
    throw FlowControlError("credit overflow at output " + std::to_string(out_port) + " vc " +
                           std::to_string(vc));
  }
  ++c;
}

void SwitchState::set_credits(PortIndex out_port, VcIndex vc, int value) {
  if (value < 0 || value > params_.vc_capacity) throw FlowControlError("credit value out of range");
  credits_[cidx(out_port, vc)] = value;
}

routing::CreditView SwitchState::credit_view(PortIndex first, int count) const {
  return {std::span<const int>(credits_).subspan(cidx(first, 0), static_cast<std::size_t>(count) * params_.vcs),
          params_.vcs, params_.vc_capacity};
}

}  // namespace ftsim::switching
