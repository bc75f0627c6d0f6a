#pragma once

#include <cstdint>

#include "redmon/time.hpp"

namespace redmon {

/// Modem settings of the single shared channel. Defaults: SF7, 125 kHz,
/// CR 4/5, 868 MHz, 8-symbol preamble, explicit header, CRC on.
struct LoraParams {
  int spreading_factor = 7;
  int bandwidth_hz = 125'000;
  int coding_rate_denominator = 5;  // 4/x
  int preamble_symbols = 8;
  bool explicit_header = true;
  bool crc_on = true;
  bool low_data_rate_optimize = false;
  double frequency_mhz = 868.0;  // metadata only

  /// Throws std::invalid_argument naming the bad field.
  void validate() const;
};

/// Duration of one chirp symbol, 2^SF / BW, in milliseconds.
double symbol_time_ms(const LoraParams& p);

/// Number of payload symbols (including the 8 fixed header symbols).
std::int64_t payload_symbols(std::uint32_t payload_bytes, const LoraParams& p);

/// Semtech SX127x time-on-air in milliseconds.
double time_on_air_ms(std::uint32_t payload_bytes, const LoraParams& p);

/// Time-on-air rounded to the simulator's microsecond resolution.
SimTime time_on_air(std::uint32_t payload_bytes, const LoraParams& p);

}  // namespace redmon
