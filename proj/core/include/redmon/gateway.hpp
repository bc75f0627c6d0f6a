#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "redmon/channel.hpp"
#include "redmon/firmware.hpp"
#include "redmon/packet.hpp"
#include "redmon/simulator.hpp"

namespace redmon {

struct RawReception {
  Packet packet;
  std::uint32_t gateway_id;
  double rssi_dbm;
  SimTime time;
};

struct UniqueReception {
  Packet packet;
  std::uint32_t gateway_id;  // gateway that delivered the earliest copy
  double rssi_dbm;
  SimTime time;
};

struct DedupResult {
  std::vector<UniqueReception> stream;  // ordered by (time, node, role, seq)
  std::uint64_t duplicates = 0;
};

/// Everything the gateways forwarded. The backhaul is loss- and delay-free.
class ServerLog {
 public:
  void add(RawReception r) { raw_.push_back(std::move(r)); }
  const std::vector<RawReception>& raw() const { return raw_; }

 private:
  std::vector<RawReception> raw_;
};

/// Keeps the earliest copy of each (node, board, seq); data and heartbeat
/// frames only. The result does not depend on the order of `raw`.
DedupResult deduplicate(const std::vector<RawReception>& raw);

struct GatewayRecord {
  std::uint32_t id;
  Packet packet;
  double rssi_dbm;
  SimTime time;
};

/// Receives node frames, forwards them to the server and acknowledges primary
/// data from the nodes it is home gateway for.
class Gateway : public RadioListener {
 public:
  Gateway(Simulator& sim, Channel& channel, const FaultPlan& faults, std::uint32_t id, std::string name,
          Position pos, double tx_power_dbm, double wall_loss_db, std::uint32_t ack_bytes,
          ServerLog* server);

  void add_home_node(NodeId node) { home_nodes_.insert(node); }
  bool enabled(SimTime t) const { return !faults_.gateway_failed(id_, t); }

  std::uint32_t id() const { return id_; }
  const std::string& name() const { return name_; }
  RadioId radio() const { return radio_; }
  const std::vector<GatewayRecord>& rx_log() const { return rx_log_; }
  std::uint64_t acks_sent() const { return acks_sent_; }

  void on_frame(const Packet& packet, const Reception& rx) override;

 private:
  void send_ack(Packet ack);

  Simulator& sim_;
  Channel& channel_;
  const FaultPlan& faults_;
  std::uint32_t id_;
  std::string name_;
  RadioId radio_;
  std::uint32_t ack_bytes_;
  ServerLog* server_;
  std::set<NodeId> home_nodes_;
  std::vector<GatewayRecord> rx_log_;
  std::uint64_t acks_sent_ = 0;
};

}  // namespace redmon
