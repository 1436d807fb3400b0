#include "ftsim/event_queue.hpp"

#include <bit>
#include <string>

#include "ftsim/error.hpp"

namespace ftsim::engine {

std::uint64_t EventQueue::push(TimeNs time, EventKind kind, Target target, std::uint32_t a, std::uint32_t b,
                               std::uint32_t c) {
  if (time < now_) {
    throw SimulationError("event scheduled in the past: t=" + std::to_string(time) + " < now=" +
                          std::to_string(now_));
  }
  const std::uint64_t seq = next_seq_++;
  const Event e{time, seq, kind, target, a, b, c};
  auto& lane = lanes_[static_cast<std::size_t>(kind)];
  if (lane.empty() || lane.back().time <= time) {
    lane.push_back(e);
    nonempty_ |= 1u << static_cast<unsigned>(kind);
  } else {
    heap_.push(e);
  }
  ++size_;
  cached_source_ = kUnknown;
  return seq;
}

std::size_t EventQueue::next_source() const {
  if (cached_source_ != kUnknown) return cached_source_;
  std::size_t best = kEventKinds;
  const Event* top = heap_.empty() ? nullptr : &heap_.top();
  for (std::uint32_t bits = nonempty_; bits; bits &= bits - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(bits));
    const Event& f = lanes_[i].front();
    if (!top || later(*top, f)) {
      top = &f;
      best = i;
    }
  }
  cached_source_ = best;
  return best;
}

TimeNs EventQueue::next_time() const {
  if (size_ == 0) throw SimulationError("next_time on an empty event queue");
  const std::size_t src = next_source();
  return src == kEventKinds ? heap_.top().time : lanes_[src].front().time;
}

Event EventQueue::pop() {
  if (size_ == 0) throw SimulationError("pop from an empty event queue");
  const std::size_t src = next_source();
  Event e;
  if (src == kEventKinds) {
    e = heap_.top();
    heap_.pop();
  } else {
    e = lanes_[src].front();
    lanes_[src].pop_front();
    if (lanes_[src].empty()) nonempty_ &= ~(1u << src);
  }
  --size_;
  cached_source_ = kUnknown;
  now_ = e.time;
  return e;
}

}  // namespace ftsim::engine
