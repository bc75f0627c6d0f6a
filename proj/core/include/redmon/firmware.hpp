#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redmon/channel.hpp"
#include "redmon/packet.hpp"
#include "redmon/rng.hpp"
#include "redmon/sarb.hpp"
#include "redmon/simulator.hpp"

namespace redmon {

// ---------------------------------------------------------------------------
// Thresholds and detection

struct ThresholdTable {
  std::array<FieldRange, kSensorFieldCount> bounds;

  static ThresholdTable defaults();
  FieldRange& operator[](SensorField f) { return bounds[static_cast<std::size_t>(f)]; }
  const FieldRange& operator[](SensorField f) const { return bounds[static_cast<std::size_t>(f)]; }
  /// lower < upper and both inside the sensor's measurement range.
  void validate() const;
};

/// True iff any present field lies outside its (lower, upper) bounds.
/// Absent fields never trigger.
bool check_thresholds(const SensorReading& reading, const ThresholdTable& thresholds);

/// Fields that are absent from a data packet's reading. A packet without a
/// reading reports every field.
std::vector<SensorField> detect_incomplete(const Packet& packet);

inline constexpr double kAnomalyRelativeBound = 0.25;

/// Fields where |p - s| / max(|s|, eps) > bound. Fields absent on either side
/// are skipped.
std::vector<SensorField> detect_anomaly(const SensorReading& primary, const SensorReading& secondary,
                                        double bound = kAnomalyRelativeBound);

// ---------------------------------------------------------------------------
// Faults

enum class FaultKind { hard_failure, sensor_read_failure, sensor_anomaly, gateway_failure };

std::string_view to_string(FaultKind k);
std::optional<FaultKind> parse_fault_kind(std::string_view s);

struct FaultSpec {
  FaultKind kind = FaultKind::hard_failure;
  NodeId node_id = 0;                   // board faults
  BoardRole role = BoardRole::primary;  // board faults
  std::uint32_t gateway_id = 0;         // gateway faults
  std::optional<SensorField> affected_sensor;
  SimTime start = SimTime::from_s(5 * 60);
  SimTime end = SimTime::from_s(25 * 60);
  double anomaly_multiplier = 1.5;

  bool active_at(SimTime t) const { return start <= t && t < end; }
  bool targets_board(NodeId node, BoardRole r) const {
    return kind != FaultKind::gateway_failure && node_id == node && role == r;
  }
};

/// Validated set of injected faults.
class FaultPlan {
 public:
  FaultPlan() = default;

  /// Throws std::invalid_argument when the window is empty or outside
  /// [0, duration], a sensor fault lacks its sensor, or two hard failures of
  /// the same board overlap.
  void inject(const FaultSpec& spec, SimTime duration);

  const std::vector<FaultSpec>& specs() const { return specs_; }
  bool empty() const { return specs_.empty(); }

  bool board_hard_failed(NodeId node, BoardRole role, SimTime t) const;
  bool board_faulty(NodeId node, BoardRole role, SimTime t) const;
  bool gateway_failed(std::uint32_t gateway, SimTime t) const;

  /// Applies active sensor faults to a reading. Returns true if any changed it.
  bool apply_sensor_faults(NodeId node, BoardRole role, SimTime t, SensorReading& reading) const;

 private:
  std::vector<FaultSpec> specs_;
};

// ---------------------------------------------------------------------------
// Environment

/// True habitat state of one module: each quantity wanders in a reflected
/// random walk within +-5 % of its nominal value, stepped once per second.
class Environment {
 public:
  Environment(std::uint64_t master_seed, NodeId node);

  /// t must be non-decreasing across calls.
  SensorReading at(SimTime t);

  /// Adds a constant offset to a field from `from` onward (used to force
  /// threshold crossings in tests and scenarios).
  void add_excursion(SensorField f, SimTime from, double offset);

  static double nominal(SensorField f);

 private:
  void step();

  RngStream rng_;
  std::array<double, kSensorFieldCount> value_{};
  SimTime clock_{};
  struct Excursion {
    SensorField field;
    SimTime from;
    double offset;
  };
  std::vector<Excursion> excursions_;
};

// ---------------------------------------------------------------------------
// Boards

struct FirmwareConfig {
  std::int64_t sense_period_ms = 1'000;
  std::int64_t sense_delay_ms = 3'000;
  std::int64_t sensing_interval_ms = 35'000;
  std::int64_t heartbeat_period_ms = 60'000;
  std::uint32_t data_bytes = 76;
  std::uint32_t heartbeat_bytes = 12;
  double measurement_sigma_rel = 0.002;
  // Boards and the noise board power up at independent random instants in
  // [0, boot_spread_ms) so periodic schedules do not start phase-locked.
  std::int64_t boot_spread_ms = 5'000;

  void validate(const SarbConfig& mac) const;
};

/// What a board needs from its surroundings.
struct BoardContext {
  Simulator& sim;
  Channel& channel;
  Environment& environment;
  const FaultPlan& faults;
  const ThresholdTable& thresholds;
  const FirmwareConfig& firmware;
  SimTime duration;
  std::uint64_t master_seed;
};

struct SlotRecord {
  SimTime time;
  bool powered;
  bool faulty;  // a board fault on the primary was active at the slot
};

class PrimaryBoard : public RadioListener {
 public:
  PrimaryBoard(BoardContext ctx, NodeId node, Position pos, double tx_power_dbm, SarbConfig mac);

  void start();

  NodeId node() const { return node_; }
  RadioId radio() const { return radio_; }
  const SarbMac& mac() const { return mac_; }

  /// Nominal slot schedule, recorded whether or not the board was powered.
  const std::vector<SlotRecord>& slots() const { return slots_; }

  bool powered(SimTime t) const;
  /// Fresh reading with active sensor faults applied; nullopt when hard-failed.
  std::optional<SensorReading> sense(SimTime t, bool* faulty = nullptr);

  void on_frame(const Packet& packet, const Reception& rx) override;

  std::uint64_t emergencies() const { return emergencies_; }
  /// Data packets sent right after power came back.
  std::uint64_t recovery_reports() const { return recovery_reports_; }

 private:
  void on_data_slot(std::int64_t slot_index);
  void on_retx_slot();
  void on_sense_tick();
  void on_emergency(const SensorReading& reading, bool faulty);
  void send_unscheduled(const SensorReading& reading, bool faulty, bool emergency);
  void transmit(Packet packet);
  /// Tracks power transitions; true when power has just come back.
  bool check_power();

  BoardContext ctx_;
  NodeId node_;
  RadioId radio_;
  SarbMac mac_;
  RngStream measure_rng_;
  std::uint32_t next_seq_ = 0;
  std::vector<SlotRecord> slots_;
  std::vector<Packet> deferred_;  // waiting for our own frame to end
  bool in_emergency_ = false;
  bool was_down_ = false;
  std::uint64_t emergencies_ = 0;
  std::uint64_t recovery_reports_ = 0;
};

struct SecondaryStats {
  std::uint64_t heartbeats = 0;
  std::uint64_t backups = 0;
  std::uint64_t correctives = 0;
  std::uint64_t overheard = 0;
};

class SecondaryBoard : public RadioListener {
 public:
  SecondaryBoard(BoardContext ctx, NodeId node, Position pos, double tx_power_dbm);

  void start();

  RadioId radio() const { return radio_; }
  const SecondaryStats& stats() const { return stats_; }
  SimTime watchdog_deadline() const { return watchdog_deadline_; }

  bool powered(SimTime t) const;
  std::optional<SensorReading> sense(SimTime t, bool* faulty = nullptr);

  void on_frame(const Packet& packet, const Reception& rx) override;

 private:
  void arm_watchdog(SimTime deadline);
  void on_watchdog();
  void on_heartbeat();
  struct Correction {
    std::uint32_t seq;
    std::int64_t truth_slot;
  };
  void send_data(std::optional<Correction> correction);
  void send(Packet packet);

  BoardContext ctx_;
  NodeId node_;
  RadioId radio_;
  RngStream measure_rng_;
  std::uint32_t next_seq_ = 0;
  SimTime watchdog_deadline_{};
  EventHandle watchdog_;
  std::optional<std::uint32_t> last_corrected_seq_;
  SecondaryStats stats_;
};

}  // namespace redmon
