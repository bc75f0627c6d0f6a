#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <stdexcept>
#include <vector>

#include "redmon/time.hpp"

namespace redmon {

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Handle returned by schedule(); lets the owner cancel (tombstone) an event.
class EventHandle {
 public:
  EventHandle() = default;
  void cancel() {
    if (alive_) *alive_ = false;
  }
  bool pending() const { return alive_ && *alive_; }

 private:
  friend class Simulator;
  explicit EventHandle(std::shared_ptr<bool> alive) : alive_(std::move(alive)) {}
  std::shared_ptr<bool> alive_;
};

/// Single-threaded discrete-event engine. Events pop in (time, insertion
/// sequence) order, so same-time events fire in the order they were scheduled.
class Simulator {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  /// Throws SchedulingError when t is earlier than now().
  EventHandle schedule(SimTime t, Action action);
  EventHandle schedule_in(SimTime delay, Action action) { return schedule(now_ + delay, std::move(action)); }

  /// Processes every event with time <= t_end, then sets the clock to t_end.
  /// Returns the number of (non-cancelled) events executed.
  std::size_t run_until(SimTime t_end);

  std::size_t pending_events() const { return queue_.size(); }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t sequence;
    std::shared_ptr<bool> alive;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  SimTime now_{};
  std::uint64_t next_sequence_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
};

}  // namespace redmon
