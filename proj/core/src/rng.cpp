#include "redmon/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace redmon {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view stream_id) {
  return splitmix64(splitmix64(master_seed) ^ fnv1a(stream_id));
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view stream_id)
    : id_(stream_id), engine_(derive_stream_seed(master_seed, stream_id)) {}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + static_cast<std::int64_t>(engine_());  // full 64-bit range
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal(double mean, double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sigma * spare_;
  }
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return mean + sigma * r * std::cos(theta);
}

std::int64_t RngStream::draw_uniform_grid(std::int64_t lo, std::int64_t hi, std::int64_t step) {
  if (step <= 0) throw std::invalid_argument("draw_uniform_grid: step must be positive");
  if (lo > hi) throw std::invalid_argument("draw_uniform_grid: lo > hi");
  if ((hi - lo) % step != 0)
    throw std::invalid_argument("draw_uniform_grid: range is not a multiple of step");
  return lo + step * uniform_int(0, (hi - lo) / step);
}

}  // namespace redmon
