#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace redmon {

/// The twelve monitored quantities of a sensor board, in payload order.
enum class SensorField : std::uint8_t {
  co2_ppm,
  pressure_hpa,
  o2_percent,
  co_ppm,
  temp1_c,
  temp2_c,
  temp3_c,
  temp4_c,
  humidity1_pct,
  humidity2_pct,
  humidity3_pct,
  humidity4_pct,
};

inline constexpr std::size_t kSensorFieldCount = 12;

std::string_view field_name(SensorField f);
std::optional<SensorField> parse_field(std::string_view name);
const std::array<SensorField, kSensorFieldCount>& all_fields();

struct FieldRange {
  double lower;
  double upper;
};

/// Measurement range of the physical sensor for a field.
FieldRange measurement_range(SensorField f);

/// One sample of all sensors. An empty optional is a failed read.
struct SensorReading {
  std::array<std::optional<double>, kSensorFieldCount> values{};

  std::optional<double>& operator[](SensorField f) { return values[static_cast<std::size_t>(f)]; }
  const std::optional<double>& operator[](SensorField f) const {
    return values[static_cast<std::size_t>(f)];
  }
  bool operator==(const SensorReading&) const = default;
};

enum class PacketKind : std::uint8_t { data, heartbeat, ack, noise };
enum class BoardRole : std::uint8_t { primary, secondary };

std::string_view to_string(PacketKind k);
std::string_view to_string(BoardRole r);

using NodeId = std::uint32_t;

struct Packet {
  PacketKind kind = PacketKind::data;
  NodeId node_id = 0;
  BoardRole board_role = BoardRole::primary;
  std::uint32_t seq = 0;
  std::optional<SensorReading> reading;
  std::uint32_t size_bytes = 0;
  bool emergency = false;
  // Secondary data sent in response to an incomplete or anomalous primary packet.
  bool corrective = false;
  std::uint32_t corrects_seq = 0;  // primary seq a corrective replaces
  // For acks: the seq being acknowledged.
  std::uint32_t acked_seq = 0;

  // Ground truth carried alongside the frame for metric accounting only; no
  // board or gateway logic reads these.
  // Primary data slot index (for correctives: the slot of the corrected
  // packet), -1 if unscheduled.
  std::int64_t truth_slot = -1;
  bool truth_faulty = false;     // payload affected by an injected sensor fault
};

}  // namespace redmon
