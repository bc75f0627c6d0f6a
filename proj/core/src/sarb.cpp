#include "redmon/sarb.hpp"

#include <algorithm>

namespace redmon {

void SarbConfig::validate() const {
  if (slot_step_ms <= 0) throw std::invalid_argument("mac.slot_step_ms must be positive");
  if (slot_min_ms <= 0 || slot_min_ms > slot_max_ms)
    throw std::invalid_argument("mac.slot_min_ms must be positive and <= mac.slot_max_ms");
  if ((slot_max_ms - slot_min_ms) % slot_step_ms != 0)
    throw std::invalid_argument("mac.slot_max_ms - mac.slot_min_ms must be a multiple of mac.slot_step_ms");
  if (retx_slots_per_cycle < 0) throw std::invalid_argument("mac.retx_slots_per_cycle must be >= 0");
  if (retx_interval_ms <= 0) throw std::invalid_argument("mac.retx_interval_ms must be positive");
  if (retx_slots_per_cycle * retx_interval_ms >= slot_min_ms)
    throw std::invalid_argument("mac.retx_slots_per_cycle * mac.retx_interval_ms must be < mac.slot_min_ms");
  if (queue_capacity == 0) throw std::invalid_argument("mac.queue_capacity must be positive");
  if (ack_timeout_ms <= 0) throw std::invalid_argument("mac.ack_timeout_ms must be positive");
  if (fixed_interval_ms <= 0) throw std::invalid_argument("mac.fixed_interval_ms must be positive");
}

SarbMac::SarbMac(SarbConfig cfg, RngStream rng)
    : cfg_(cfg), rng_(std::move(rng)), queue_(cfg.queue_capacity) {
  cfg_.validate();
}

CycleSchedule SarbMac::schedule_next_data_slot(SimTime now) {
  CycleSchedule out;
  if (!cfg_.enabled) {
    out.next_data_slot = now + SimTime::from_ms(cfg_.fixed_interval_ms);
  } else {
    out.next_data_slot =
        now + SimTime::from_ms(rng_.draw_uniform_grid(cfg_.slot_min_ms, cfg_.slot_max_ms, cfg_.slot_step_ms));
    for (int k = 1; k <= cfg_.retx_slots_per_cycle; ++k) {
      out.retx_slots.push_back(now + SimTime::from_ms(cfg_.retx_interval_ms) * k);
    }
  }
  next_data_slot_ = out.next_data_slot;
  return out;
}

std::optional<SimTime> SarbMac::on_transmit(const Packet& packet, SimTime now) {
  ++stats_.data_sent;
  if (!cfg_.enabled) return std::nullopt;
  const SimTime deadline = now + SimTime::from_ms(cfg_.ack_timeout_ms);
  pending_.push_back(PendingAck{packet.seq, deadline, packet});
  return deadline;
}

bool SarbMac::on_ack(std::uint32_t seq) {
  const auto it = std::find_if(pending_.begin(), pending_.end(),
                               [seq](const PendingAck& p) { return p.seq == seq; });
  if (it == pending_.end()) return false;
  pending_.erase(it);
  ++stats_.acks;
  return true;
}

bool SarbMac::on_ack_timeout(std::uint32_t seq, SimTime now) {
  const auto it = std::find_if(pending_.begin(), pending_.end(), [seq, now](const PendingAck& p) {
    return p.seq == seq && p.deadline <= now;
  });
  if (it == pending_.end()) return false;
  Packet packet = std::move(it->packet);
  pending_.erase(it);
  ++stats_.timeouts;
  if (queue_.push(std::move(packet))) ++stats_.evictions;
  return true;
}

std::optional<Packet> SarbMac::on_retx_slot() {
  if (!cfg_.enabled || awaiting_ack()) return std::nullopt;
  auto packet = queue_.pop();
  if (packet) ++stats_.retransmissions;
  return packet;
}

void SarbMac::reset() {
  queue_.clear();
  pending_.clear();
}

}  // namespace redmon
