#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redmon/metrics.hpp"

namespace redmon {

/// Metric names used in reports.
namespace metric {
inline constexpr const char* prr_redundant = "prr_redundant";
inline constexpr const char* prr_primary_only = "prr_primary_only";
inline constexpr const char* detection_rate = "detection_rate";
inline constexpr const char* delay_violations = "delay_violations";
inline constexpr const char* delay_violations_primary_only = "delay_violations_primary_only";
inline constexpr const char* max_gap_ms = "max_gap_ms";
inline constexpr const char* max_gap_primary_only_ms = "max_gap_primary_only_ms";
inline constexpr const char* epochs = "epochs";
inline constexpr const char* duplicates = "duplicates";
inline constexpr const char* unique_packets = "unique_packets";
}  // namespace metric

/// Metrics whose values are fractions; comparisons report them in
/// percentage points.
bool is_ratio_metric(const std::string& name);

struct IterationMetrics {
  std::uint64_t seed = 0;
  std::map<std::string, double> values;              // undefined metrics are absent
  std::map<std::string, std::vector<double>> rssi;   // reported RSSI per gateway name
  std::string trace_digest;                          // hash of the event trace

  /// Throws MetricError naming the metric when it is absent.
  double at(const std::string& name) const;
  bool operator==(const IterationMetrics&) const = default;
};

struct MetricsReport {
  std::string scenario;
  std::vector<IterationMetrics> iterations;

  /// Mean of each metric defined in every iteration.
  std::map<std::string, double> summary() const;
  /// Throws MetricError when the metric is missing from any iteration.
  double mean(const std::string& name) const;
  /// RSSI pooled over iterations, per gateway.
  std::map<std::string, RssiStats> rssi_summary() const;

  bool operator==(const MetricsReport&) const = default;
};

std::string to_json(const MetricsReport& report);
/// Reads what to_json() writes; derived summary fields are recomputed.
MetricsReport report_from_json(const std::string& text);

/// Columns scenario,iteration,metric,value. Summary rows use iteration
/// "mean"; RSSI samples appear as metric rssi.<gateway>.sample.
std::string to_csv(const MetricsReport& report);

/// mean(a) - mean(b); ratio metrics are scaled to percentage points.
double compare_scenarios(const MetricsReport& a, const MetricsReport& b, const std::string& metric);

}  // namespace redmon
