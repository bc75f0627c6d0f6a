#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "redmon/gateway.hpp"
#include "redmon/report.hpp"
#include "redmon/scenario.hpp"

namespace redmon {

/// One assembled simulation: boards, gateways, noise and the server. Built
/// from a validated config and a master seed.
class Network {
 public:
  Network(const ScenarioConfig& cfg, std::uint64_t seed);
  ~Network();
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Optional per-event trace lines (frame outcomes).
  void set_trace(std::function<void(const std::string&)> sink);

  /// Runs until the end of the scenario plus one delay bound, so frames of
  /// the last cycle are still counted.
  void run();

  IterationMetrics metrics() const;

  const ServerLog& server() const;
  const std::vector<NodeSchedule> schedules() const;
  const Channel& channel() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

IterationMetrics run_iteration(const ScenarioConfig& cfg, std::uint64_t seed);

/// Runs every seed (in parallel); results keep seed order.
MetricsReport run_scenario(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds);
MetricsReport run_scenario(const ScenarioConfig& cfg);

}  // namespace redmon
