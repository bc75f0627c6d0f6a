#include "redmon/lora.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace redmon {

void LoraParams::validate() const {
  if (spreading_factor < 6 || spreading_factor > 12)
    throw std::invalid_argument("lora.spreading_factor must be in [6, 12]");
  if (bandwidth_hz <= 0) throw std::invalid_argument("lora.bandwidth_hz must be positive");
  if (coding_rate_denominator < 5 || coding_rate_denominator > 8)
    throw std::invalid_argument("lora.coding_rate must be in [5, 8] (meaning 4/x)");
  if (preamble_symbols < 0) throw std::invalid_argument("lora.preamble_symbols must be >= 0");
}

double symbol_time_ms(const LoraParams& p) {
  return std::ldexp(1.0, p.spreading_factor) / p.bandwidth_hz * 1000.0;
}

std::int64_t payload_symbols(std::uint32_t payload_bytes, const LoraParams& p) {
  const std::int64_t sf = p.spreading_factor;
  const std::int64_t de = p.low_data_rate_optimize ? 1 : 0;
  const std::int64_t ih = p.explicit_header ? 0 : 1;
  const std::int64_t crc = p.crc_on ? 1 : 0;
  const std::int64_t cr = p.coding_rate_denominator - 4;

  const std::int64_t numerator = 8 * static_cast<std::int64_t>(payload_bytes) - 4 * sf + 28 +
                                 16 * crc - 20 * ih;
  const std::int64_t denominator = 4 * (sf - 2 * de);
  std::int64_t blocks = 0;
  if (numerator > 0) blocks = (numerator + denominator - 1) / denominator;
  return 8 + std::max<std::int64_t>(blocks * (cr + 4), 0);
}

double time_on_air_ms(std::uint32_t payload_bytes, const LoraParams& p) {
  const double tsym = symbol_time_ms(p);
  const double preamble = (p.preamble_symbols + 4.25) * tsym;
  return preamble + static_cast<double>(payload_symbols(payload_bytes, p)) * tsym;
}

SimTime time_on_air(std::uint32_t payload_bytes, const LoraParams& p) {
  return SimTime::from_us(std::llround(time_on_air_ms(payload_bytes, p) * 1000.0));
}

}  // namespace redmon
