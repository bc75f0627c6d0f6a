#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace redmon {

/// Derives a stream seed from a master seed and a stable text label.
/// FNV-1a over the label, mixed with the master seed through splitmix64.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view stream_id);

/// Seeded random stream. Identical (master_seed, stream_id) pairs replay the
/// same draws; the distributions below are hand-rolled so results do not
/// depend on the standard library's distribution implementations.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view stream_id);

  const std::string& id() const { return id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi], rejection sampled (no modulo bias).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1).
  double uniform01();

  /// Standard normal scaled by sigma (Box-Muller, one cached spare).
  double normal(double mean, double sigma);

  /// lo + k*step, k uniform over {0..(hi-lo)/step}. Times in milliseconds.
  /// Throws std::invalid_argument when step <= 0, lo > hi or the range is
  /// not a whole number of steps.
  std::int64_t draw_uniform_grid(std::int64_t lo, std::int64_t hi, std::int64_t step);

 private:
  std::string id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace redmon
