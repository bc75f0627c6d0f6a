#include "redmon/metrics.hpp"

#include <algorithm>
#include <map>

namespace redmon {

bool is_good_data(const Packet& p) {
  if (p.kind != PacketKind::data || !p.reading || p.truth_faulty) return false;
  return std::all_of(p.reading->values.begin(), p.reading->values.end(),
                     [](const auto& v) { return v.has_value(); });
}

EpochCoverage compute_coverage(const std::vector<UniqueReception>& stream, const NodeSchedule& schedule,
                               SimTime window) {
  const std::size_t n = schedule.slots.size();
  EpochCoverage cov;
  cov.by_primary.assign(n, false);
  cov.by_secondary.assign(n, false);
  cov.any.assign(n, false);
  cov.faulty.resize(n);
  for (std::size_t k = 0; k < n; ++k) cov.faulty[k] = schedule.slots[k].faulty;

  std::vector<SimTime> starts(n);
  for (std::size_t k = 0; k < n; ++k) starts[k] = schedule.slots[k].time;

  for (const auto& r : stream) {
    const Packet& p = r.packet;
    if (p.node_id != schedule.node || !is_good_data(p)) continue;
    const bool primary = p.board_role == BoardRole::primary;
    if (p.truth_slot >= 0) {
      // Scheduled packet, or a corrective standing in for one.
      const auto k = static_cast<std::size_t>(p.truth_slot);
      if (k < n && r.time >= starts[k] && r.time < starts[k] + window)
        (primary ? cov.by_primary : cov.by_secondary)[k] = true;
      continue;
    }
    // Unscheduled packet: every epoch whose window contains the arrival.
    auto first = std::lower_bound(starts.begin(), starts.end(), r.time - window + SimTime::from_us(1));
    for (auto it = first; it != starts.end() && *it <= r.time; ++it) {
      const auto k = static_cast<std::size_t>(it - starts.begin());
      (primary ? cov.by_primary : cov.by_secondary)[k] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) cov.any[k] = cov.by_primary[k] || cov.by_secondary[k];
  return cov;
}

PrrPair compute_prr(const std::vector<UniqueReception>& stream, const std::vector<NodeSchedule>& schedules,
                    SimTime window) {
  PrrPair out;
  for (const auto& s : schedules) {
    const auto cov = compute_coverage(stream, s, window);
    for (std::size_t k = 0; k < cov.any.size(); ++k) {
      ++out.redundant.total;
      ++out.primary_only.total;
      if (cov.any[k]) ++out.redundant.covered;
      if (cov.by_primary[k]) ++out.primary_only.covered;
    }
  }
  if (out.redundant.total == 0) throw MetricError("PRR undefined: the expected schedule is empty");
  return out;
}

double compute_detection_rate(const std::vector<UniqueReception>& stream,
                              const std::vector<NodeSchedule>& schedules, SimTime window) {
  std::uint64_t missed = 0;
  std::uint64_t detected = 0;
  for (const auto& s : schedules) {
    const auto cov = compute_coverage(stream, s, window);
    for (std::size_t k = 0; k < cov.any.size(); ++k) {
      if (cov.by_primary[k]) continue;
      ++missed;
      if (cov.by_secondary[k]) ++detected;
    }
  }
  if (missed == 0) throw MetricError("detection rate undefined: no faulty or missed primary epochs");
  return static_cast<double>(detected) / static_cast<double>(missed);
}

namespace {

std::map<NodeId, std::vector<SimTime>> good_arrivals(const std::vector<UniqueReception>& stream,
                                                     bool primary_only) {
  std::map<NodeId, std::vector<SimTime>> by_node;
  for (const auto& r : stream) {
    if (!is_good_data(r.packet)) continue;
    if (primary_only && r.packet.board_role != BoardRole::primary) continue;
    by_node[r.packet.node_id].push_back(r.time);
  }
  for (auto& [node, times] : by_node) std::sort(times.begin(), times.end());
  return by_node;
}

}  // namespace

std::uint64_t delay_violations(const std::vector<UniqueReception>& stream, SimTime bound, bool primary_only) {
  if (bound <= SimTime{}) throw std::invalid_argument("delay bound must be positive");
  std::uint64_t violations = 0;
  for (const auto& [node, times] : good_arrivals(stream, primary_only)) {
    for (std::size_t i = 1; i < times.size(); ++i) {
      const std::int64_t gap = (times[i] - times[i - 1]).us();
      if (gap > bound.us()) violations += static_cast<std::uint64_t>((gap + bound.us() - 1) / bound.us() - 1);
    }
  }
  return violations;
}

SimTime max_data_gap(const std::vector<UniqueReception>& stream, bool primary_only) {
  SimTime worst{};
  for (const auto& [node, times] : good_arrivals(stream, primary_only)) {
    for (std::size_t i = 1; i < times.size(); ++i) worst = std::max(worst, times[i] - times[i - 1]);
  }
  return worst;
}

RssiStats summarize_rssi(std::vector<double> samples) {
  RssiStats s;
  s.count = samples.size();
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(samples.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, samples.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] + (samples[hi] - samples[lo]) * frac;
  };
  s.min = samples.front();
  s.max = samples.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

}  // namespace redmon
