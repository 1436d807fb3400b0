#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ftsim/islip.hpp"
#include "ftsim/routing.hpp"
#include "ftsim/types.hpp"

namespace ftsim::switching {

using PacketHandle = std::uint32_t;

struct Packet {
  std::uint64_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  VcIndex vc = 0;
  int size_bytes = 0;
  TimeNs injected_at = 0;
  PortIndex out_port = -1;  // output chosen at the switch currently holding it
};

// Slab of in-flight packets addressed by handle.
class PacketPool {
 public:
  PacketHandle acquire(const Packet& p);
  void release(PacketHandle h);
  Packet& operator[](PacketHandle h) { return slots_[h]; }
  const Packet& operator[](PacketHandle h) const { return slots_[h]; }
  std::size_t live() const { return slots_.size() - free_.size(); }

 private:
  std::vector<Packet> slots_;
  std::vector<PacketHandle> free_;
};

// Fixed-capacity FIFO of packet handles.
class RingQueue {
 public:
  explicit RingQueue(int capacity = 0) : buf_(static_cast<std::size_t>(capacity)) {}

  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == static_cast<int>(buf_.size()); }
  int size() const { return size_; }
  int capacity() const { return static_cast<int>(buf_.size()); }
  PacketHandle front() const { return buf_[head_]; }
  void push(PacketHandle h);
  PacketHandle pop();

 private:
  std::vector<PacketHandle> buf_;
  std::size_t head_ = 0;
  int size_ = 0;
};

struct SwitchParams {
  int ports = 0;
  int vcs = 1;
  int vc_capacity = 1;  // packets per (input port, VC)
  bool voq = false;
  int islip_iterations = 0;  // 0 means one per port
};

// A packet leaving through the crossbar this epoch.
struct Transfer {
  PortIndex in_port = 0;
  PortIndex out_port = 0;
  VcIndex vc = 0;
  PacketHandle packet = 0;
};

class SwitchState;

// Picks the output port for a packet held by `sw`.
using RouteFn = std::function<PortIndex(SwitchState& sw, const Packet& packet)>;

// Input-queued switch: per-port VC buffers (optionally split per output into
// VOQs), per-(output, VC) credit counters, and an iSLIP arbiter.
//
// Without VOQs a packet is routed when it reaches the head of its VC queue.
// With VOQs it is routed on arrival, since the VOQ index is its output port.
class SwitchState {
 public:
  SwitchState(const SwitchParams& params, RouteFn route);

  const SwitchParams& params() const { return params_; }

  void on_packet_arrival(PortIndex in_port, PacketHandle h, PacketPool& pool);

  // Routes pending heads and returns the per-input request bitmasks. A head
  // requests its output only while that (output, VC) holds a credit.
  std::span<const std::uint64_t> build_requests(PacketPool& pool);

  Matching arbitrate_requests(std::span<const std::uint64_t> requests);

  // Dequeues one packet per matched pair and spends its credit.
  const std::vector<Transfer>& forward_matched(const Matching& matching, PacketPool& pool);

  // build_requests + arbitrate_requests + forward_matched.
  const std::vector<Transfer>& arbitrate(PacketPool& pool);

  void on_credit_return(PortIndex out_port, VcIndex vc);

  int credits(PortIndex out_port, VcIndex vc) const { return credits_[cidx(out_port, vc)]; }
  void set_credits(PortIndex out_port, VcIndex vc, int value);
  int occupancy(PortIndex in_port, VcIndex vc) const { return occupancy_[cidx(in_port, vc)]; }
  int resident() const { return resident_; }

  // Credits of ports [first, first + count) as a routing view.
  routing::CreditView credit_view(PortIndex first, int count) const;
  routing::CongestionFlags& flags() { return flags_; }
  void init_flags(int up_ports) { flags_ = routing::CongestionFlags(up_ports, params_.vcs); }

  IslipPointers& pointers() { return pointers_; }

 private:
  std::size_t cidx(PortIndex port, VcIndex vc) const {
    return static_cast<std::size_t>(port) * params_.vcs + vc;
  }
  RingQueue& voq(PortIndex in, VcIndex vc, PortIndex out) {
    return queues_[(cidx(in, vc)) * params_.ports + out];
  }
  PortIndex route(PacketHandle h, PacketPool& pool);

  SwitchParams params_;
  RouteFn route_;
  std::vector<RingQueue> queues_;           // [in][vc] or [in][vc][out]
  std::vector<std::uint64_t> voq_nonempty_;  // [in][vc] bitmask of outputs
  std::vector<int> occupancy_;               // [in][vc]
  std::vector<int> credits_;                 // [out][vc]
  std::vector<int> vc_pointer_;              // [in]
  std::vector<std::uint64_t> requests_;      // [in]
  std::vector<Transfer> transfers_;
  IslipPointers pointers_;
  routing::CongestionFlags flags_;
  int resident_ = 0;
};

}  // namespace ftsim::switching
