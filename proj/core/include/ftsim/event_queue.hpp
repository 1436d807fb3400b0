#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <queue>
#include <vector>

#include "ftsim/types.hpp"

namespace ftsim::engine {

enum class EventKind : std::uint8_t {
  injection,
  link_arrival,
  arbitration_epoch,
  credit_return,
  metrics_tick,
  audit,
  progress_check,
};

inline constexpr std::size_t kEventKinds = 7;

// Who receives a link-level event.
enum class Target : std::uint8_t { sw, node };

struct Event {
  TimeNs time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::injection;
  Target target = Target::sw;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
};

// Events pop in (time, seq) order; seq is assigned on push, so ties resolve
// in scheduling order.
//
// Most kinds are scheduled at a fixed delay from a monotone clock, so each kind
// gets a FIFO lane that accepts events while their times are non-decreasing.
// Out-of-order events fall back to a binary heap. Pop takes the (time, seq)
// minimum over the heap and the lane fronts.
class EventQueue {
 public:
  std::uint64_t push(TimeNs time, EventKind kind, Target target = Target::sw, std::uint32_t a = 0,
                     std::uint32_t b = 0, std::uint32_t c = 0);
  Event pop();
  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  TimeNs next_time() const;
  TimeNs now() const { return now_; }

 private:
  static bool later(const Event& x, const Event& y) {
    return x.time != y.time ? x.time > y.time : x.seq > y.seq;
  }
  struct Later {
    bool operator()(const Event& x, const Event& y) const { return later(x, y); }
  };
  // Lane index holding the next event, or kEventKinds for the heap.
  std::size_t next_source() const;

  static constexpr std::size_t kUnknown = kEventKinds + 1;

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::array<std::deque<Event>, kEventKinds> lanes_;
  std::size_t size_ = 0;
  std::uint32_t nonempty_ = 0;  // bit per non-empty lane
  mutable std::size_t cached_source_ = kUnknown;
  std::uint64_t next_seq_ = 0;
  TimeNs now_ = 0;
};

}  // namespace ftsim::engine
