#include "redmon/packet.hpp"

namespace redmon {

namespace {
constexpr std::array<std::string_view, kSensorFieldCount> kNames = {
    "co2_ppm",       "pressure_hpa",  "o2_percent",    "co_ppm",
    "temp1_c",       "temp2_c",       "temp3_c",       "temp4_c",
    "humidity1_pct", "humidity2_pct", "humidity3_pct", "humidity4_pct",
};
}  // namespace

std::string_view field_name(SensorField f) { return kNames[static_cast<std::size_t>(f)]; }

std::optional<SensorField> parse_field(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<SensorField>(i);
  }
  return std::nullopt;
}

const std::array<SensorField, kSensorFieldCount>& all_fields() {
  static const auto fields = [] {
    std::array<SensorField, kSensorFieldCount> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<SensorField>(i);
    return out;
  }();
  return fields;
}

FieldRange measurement_range(SensorField f) {
  switch (f) {
    case SensorField::co2_ppm: return {400.0, 10000.0};
    case SensorField::pressure_hpa: return {300.0, 1100.0};
    case SensorField::o2_percent: return {0.0, 25.0};
    case SensorField::co_ppm: return {0.0, 1000.0};
    case SensorField::temp1_c:
    case SensorField::temp2_c:
    case SensorField::temp3_c:
    case SensorField::temp4_c: return {0.0, 80.0};
    case SensorField::humidity1_pct:
    case SensorField::humidity2_pct:
    case SensorField::humidity3_pct:
    case SensorField::humidity4_pct: return {0.0, 100.0};
  }
  return {0.0, 0.0};
}

std::string_view to_string(PacketKind k) {
  switch (k) {
    case PacketKind::data: return "data";
    case PacketKind::heartbeat: return "heartbeat";
    case PacketKind::ack: return "ack";
    case PacketKind::noise: return "noise";
  }
  return "?";
}

std::string_view to_string(BoardRole r) {
  return r == BoardRole::primary ? "primary" : "secondary";
}

}  // namespace redmon
