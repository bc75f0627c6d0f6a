#include "redmon/gateway.hpp"

#include <algorithm>
#include <map>

namespace redmon {

namespace {
using Key = std::tuple<NodeId, BoardRole, std::uint32_t>;

Key key_of(const Packet& p) { return {p.node_id, p.board_role, p.seq}; }
}  // namespace

DedupResult deduplicate(const std::vector<RawReception>& raw) {
  std::map<Key, const RawReception*> earliest;
  std::uint64_t copies = 0;
  for (const auto& r : raw) {
    if (r.packet.kind != PacketKind::data && r.packet.kind != PacketKind::heartbeat) continue;
    ++copies;
    auto [it, inserted] = earliest.try_emplace(key_of(r.packet), &r);
    if (inserted) continue;
    const RawReception* best = it->second;
    // Ties on time go to the lowest gateway id so the choice is order-free.
    if (r.time < best->time || (r.time == best->time && r.gateway_id < best->gateway_id)) it->second = &r;
  }
  DedupResult out;
  out.duplicates = copies - earliest.size();
  out.stream.reserve(earliest.size());
  for (const auto& [key, r] : earliest) {
    out.stream.push_back(UniqueReception{r->packet, r->gateway_id, r->rssi_dbm, r->time});
  }
  std::sort(out.stream.begin(), out.stream.end(), [](const UniqueReception& a, const UniqueReception& b) {
    if (a.time != b.time) return a.time < b.time;
    return key_of(a.packet) < key_of(b.packet);
  });
  return out;
}

Gateway::Gateway(Simulator& sim, Channel& channel, const FaultPlan& faults, std::uint32_t id,
                 std::string name, Position pos, double tx_power_dbm, double wall_loss_db,
                 std::uint32_t ack_bytes, ServerLog* server)
    : sim_(sim),
      channel_(channel),
      faults_(faults),
      id_(id),
      name_(name),
      radio_(channel.add_radio(std::move(name), pos, tx_power_dbm, this, wall_loss_db)),
      ack_bytes_(ack_bytes),
      server_(server) {}

void Gateway::on_frame(const Packet& packet, const Reception& rx) {
  const SimTime now = sim_.now();
  if (!enabled(now)) return;
  if (packet.kind != PacketKind::data && packet.kind != PacketKind::heartbeat) return;
  rx_log_.push_back({id_, packet, rx.rssi_dbm, now});
  if (server_) server_->add({packet, id_, rx.rssi_dbm, now});

  if (packet.kind == PacketKind::data && packet.board_role == BoardRole::primary &&
      home_nodes_.contains(packet.node_id)) {
    Packet ack;
    ack.kind = PacketKind::ack;
    ack.node_id = packet.node_id;
    ack.board_role = BoardRole::primary;
    ack.seq = packet.seq;
    ack.acked_seq = packet.seq;
    ack.size_bytes = ack_bytes_;
    send_ack(std::move(ack));
  }
}

void Gateway::send_ack(Packet ack) {
  if (channel_.is_transmitting(radio_)) {
    sim_.schedule(channel_.busy_until(radio_), [this, a = std::move(ack)]() mutable {
      if (enabled(sim_.now())) send_ack(std::move(a));
    });
    return;
  }
  ++acks_sent_;
  channel_.begin_transmission(radio_, std::move(ack));
}

}  // namespace redmon
