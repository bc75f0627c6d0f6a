#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace redmon {

/// Simulation timestamp or duration. Stored as integer microseconds so that
/// sub-millisecond LoRa airtimes order exactly; exposed in milliseconds.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_us(std::int64_t us) { return SimTime{us}; }
  static constexpr SimTime from_ms(std::int64_t ms) { return SimTime{ms * 1000}; }
  static constexpr SimTime from_s(std::int64_t s) { return SimTime{s * 1'000'000}; }
  static constexpr SimTime max() { return SimTime{std::numeric_limits<std::int64_t>::max()}; }

  constexpr std::int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1000.0; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime{us_ + o.us_}; }
  constexpr SimTime operator-(SimTime o) const { return SimTime{us_ - o.us_}; }
  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime{us_ * k}; }

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

namespace literals {
constexpr SimTime operator""_ms(unsigned long long v) {
  return SimTime::from_ms(static_cast<std::int64_t>(v));
}
constexpr SimTime operator""_s(unsigned long long v) {
  return SimTime::from_s(static_cast<std::int64_t>(v));
}
constexpr SimTime operator""_min(unsigned long long v) {
  return SimTime::from_s(static_cast<std::int64_t>(v) * 60);
}
}  // namespace literals

}  // namespace redmon
