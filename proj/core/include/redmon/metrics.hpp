#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "redmon/firmware.hpp"
#include "redmon/gateway.hpp"

namespace redmon {

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr SimTime kMonitoringDelayBound = SimTime::from_ms(40'000);

/// Expected primary schedule of one node: the monitoring epochs.
struct NodeSchedule {
  NodeId node;
  std::vector<SlotRecord> slots;
};

/// A data packet with intact, complete content (ground truth).
bool is_good_data(const Packet& p);

/// Per-epoch coverage. Epoch k (slot time s_k) is covered by
///  - the primary's own packet for slot k, or a secondary corrective that
///    replaces it, arriving in [s_k, s_k + window), or
///  - any unscheduled good data packet (secondary backup, primary emergency)
///    arriving in [s_k, s_k + window).
struct EpochCoverage {
  std::vector<bool> by_primary;    // primary board only
  std::vector<bool> by_secondary;  // secondary board only
  std::vector<bool> any;           // either board
  std::vector<bool> faulty;        // board fault active on the primary at s_k
};

EpochCoverage compute_coverage(const std::vector<UniqueReception>& stream, const NodeSchedule& schedule,
                               SimTime window = kMonitoringDelayBound);

struct PrrResult {
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  double ratio() const { return total ? static_cast<double>(covered) / static_cast<double>(total) : 0.0; }
};

struct PrrPair {
  PrrResult redundant;
  PrrResult primary_only;
};

/// Throws MetricError when the schedules contain no epochs.
PrrPair compute_prr(const std::vector<UniqueReception>& stream, const std::vector<NodeSchedule>& schedules,
                    SimTime window = kMonitoringDelayBound);

/// Share of the epochs the primary left without good data (faulty, absent
/// or lost) that a secondary packet covered. Throws MetricError when there
/// are no such epochs.
double compute_detection_rate(const std::vector<UniqueReception>& stream,
                              const std::vector<NodeSchedule>& schedules,
                              SimTime window = kMonitoringDelayBound);

/// Number of missed monitoring deadlines between consecutive good data
/// packets of each node: a gap g > bound contributes ceil(g / bound) - 1.
std::uint64_t delay_violations(const std::vector<UniqueReception>& stream, SimTime bound,
                               bool primary_only = false);

/// Largest gap between consecutive good data packets of any node.
SimTime max_data_gap(const std::vector<UniqueReception>& stream, bool primary_only = false);

struct RssiStats {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  bool operator==(const RssiStats&) const = default;
};

/// Linear-interpolated quartiles; empty input gives count 0.
RssiStats summarize_rssi(std::vector<double> samples);

}  // namespace redmon
