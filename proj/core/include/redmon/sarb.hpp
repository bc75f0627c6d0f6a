#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "redmon/packet.hpp"
#include "redmon/rng.hpp"
#include "redmon/time.hpp"

namespace redmon {

/// Slotted ALOHA with random backoff. Data slots are drawn on a fixed grid;
/// each cycle carries retx_slots_per_cycle retransmission slots anchored to its
/// data slot. With enabled=false the MAC degrades to a fixed interval with no
/// acknowledgements and no retransmission.
struct SarbConfig {
  bool enabled = true;
  std::int64_t slot_min_ms = 20'000;
  std::int64_t slot_max_ms = 30'000;
  std::int64_t slot_step_ms = 500;
  std::int64_t retx_interval_ms = 6'000;
  int retx_slots_per_cycle = 2;
  std::size_t queue_capacity = 10;
  std::int64_t ack_timeout_ms = 2'000;
  std::uint32_t ack_bytes = 8;
  std::int64_t fixed_interval_ms = 30'000;

  void validate() const;
};

/// Bounded last-in-first-out buffer. Pushing onto a full buffer drops the
/// oldest element.
template <typename T>
class BoundedLifo {
 public:
  explicit BoundedLifo(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("queue capacity must be positive");
  }

  /// Returns the evicted element, if any.
  std::optional<T> push(T item) {
    std::optional<T> evicted;
    if (items_.size() == capacity_) {
      evicted = std::move(items_.front());
      items_.pop_front();
    }
    items_.push_back(std::move(item));
    return evicted;
  }

  std::optional<T> pop() {
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.back());
    items_.pop_back();
    return item;
  }

  void clear() { items_.clear(); }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Oldest first.
  const std::deque<T>& items() const { return items_; }

 private:
  std::size_t capacity_;
  std::deque<T> items_;
};

using RetxQueue = BoundedLifo<Packet>;

struct CycleSchedule {
  SimTime next_data_slot;
  std::vector<SimTime> retx_slots;
};

struct PendingAck {
  std::uint32_t seq;
  SimTime deadline;
  Packet packet;
};

struct MacStats {
  std::uint64_t data_sent = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t acks = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t evictions = 0;
};

/// Per-board MAC state machine. It never touches the simulator; the board
/// turns the returned times and packets into events and transmissions.
class SarbMac {
 public:
  SarbMac(SarbConfig cfg, RngStream rng);

  const SarbConfig& config() const { return cfg_; }

  /// Draws the next data slot and lists the retransmission slots of the
  /// current cycle.
  CycleSchedule schedule_next_data_slot(SimTime now);

  /// A fresh data (or emergency) frame is going on air at `now`. Returns the
  /// ack deadline when acknowledgements are in use.
  std::optional<SimTime> on_transmit(const Packet& packet, SimTime now);

  /// Returns true if the ack matched an outstanding frame.
  bool on_ack(std::uint32_t seq);

  /// Deadline event for `seq`. Pushes the frame to the queue if still
  /// unacknowledged; returns true in that case.
  bool on_ack_timeout(std::uint32_t seq, SimTime now);

  /// Retransmission slot: the newest queued frame if nothing is awaiting an ack.
  std::optional<Packet> on_retx_slot();

  bool awaiting_ack() const { return !pending_.empty(); }
  const RetxQueue& queue() const { return queue_; }
  const MacStats& stats() const { return stats_; }
  std::optional<SimTime> next_data_slot() const { return next_data_slot_; }

  /// Power loss: queue and outstanding acks are gone.
  void reset();

 private:
  SarbConfig cfg_;
  RngStream rng_;
  RetxQueue queue_;
  std::vector<PendingAck> pending_;
  std::optional<SimTime> next_data_slot_;
  MacStats stats_;
};

}  // namespace redmon
