#include "redmon/simulator.hpp"

#include <string>

namespace redmon {

EventHandle Simulator::schedule(SimTime t, Action action) {
  if (t < now_) {
    throw SchedulingError("cannot schedule at " + std::to_string(t.us()) + " us; clock is at " +
                          std::to_string(now_.us()) + " us");
  }
  auto alive = std::make_shared<bool>(true);
  queue_.push(Entry{t, next_sequence_++, alive, std::move(action)});
  return EventHandle{alive};
}

std::size_t Simulator::run_until(SimTime t_end) {
  if (t_end < now_) throw SchedulingError("run_until target is in the past");
  std::size_t processed = 0;
  while (!queue_.empty() && queue_.top().time <= t_end) {
    // priority_queue::top is const; move the action out before popping.
    Entry entry = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    now_ = entry.time;
    if (!*entry.alive) continue;
    *entry.alive = false;
    entry.action();
    ++processed;
  }
  now_ = t_end;
  return processed;
}

}  // namespace redmon
