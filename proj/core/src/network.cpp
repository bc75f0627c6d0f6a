#include "redmon/network.hpp"

#include <cstdio>
#include <future>

namespace redmon {

struct Network::Impl {
  Impl(const ScenarioConfig& c, std::uint64_t s)
      : cfg(c), seed(s), channel(sim, cfg.channel, seed) {}

  ScenarioConfig cfg;
  std::uint64_t seed;
  Simulator sim;
  Channel channel;
  FaultPlan faults;
  ServerLog server;
  std::vector<std::unique_ptr<Environment>> environments;
  std::vector<std::unique_ptr<Gateway>> gateways;
  std::vector<std::unique_ptr<PrimaryBoard>> primaries;
  std::vector<std::unique_ptr<SecondaryBoard>> secondaries;
  std::unique_ptr<NoiseInjector> noise;
  std::function<void(const std::string&)> user_trace;
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  bool ran = false;

  void hash(const std::string& line) {
    for (unsigned char ch : line) {
      digest ^= ch;
      digest *= 0x100000001b3ULL;
    }
    digest ^= '\n';
    digest *= 0x100000001b3ULL;
  }
};

Network::Network(const ScenarioConfig& cfg, std::uint64_t seed) : impl_(std::make_unique<Impl>(cfg, seed)) {
  cfg.validate();
  Impl& m = *impl_;
  for (const auto& f : m.cfg.faults) m.faults.inject(f, m.cfg.duration);
  m.channel.set_trace([&m](const std::string& line) {
    m.hash(line);
    if (m.user_trace) m.user_trace(line);
  });

  for (const auto& g : m.cfg.gateways) {
    m.gateways.push_back(std::make_unique<Gateway>(m.sim, m.channel, m.faults, g.id, "gateway" + std::to_string(g.id),
                                                   g.position, m.cfg.tx_power_dbm, g.wall_loss_db,
                                                   m.cfg.mac.ack_bytes, &m.server));
  }
  for (const auto& n : m.cfg.nodes) {
    for (auto& g : m.gateways)
      if (g->id() == n.home_gateway) g->add_home_node(n.id);
    m.environments.push_back(std::make_unique<Environment>(seed, n.id));
    const BoardContext ctx{m.sim, m.channel, *m.environments.back(), m.faults, m.cfg.thresholds,
                           m.cfg.firmware, m.cfg.duration, seed};
    m.primaries.push_back(std::make_unique<PrimaryBoard>(ctx, n.id, n.position, m.cfg.tx_power_dbm, m.cfg.mac));
    if (n.has_secondary)
      m.secondaries.push_back(std::make_unique<SecondaryBoard>(ctx, n.id, n.secondary_at(), m.cfg.tx_power_dbm));
  }
  if (m.cfg.noise.enabled) m.noise = std::make_unique<NoiseInjector>(m.channel, m.cfg.noise.source, seed);
}

Network::~Network() = default;

void Network::set_trace(std::function<void(const std::string&)> sink) { impl_->user_trace = std::move(sink); }

void Network::run() {
  Impl& m = *impl_;
  if (m.ran) throw std::logic_error("Network::run called twice");
  m.ran = true;
  const auto boot = [&m](const std::string& label, std::function<void()> start) {
    std::int64_t offset = 0;
    if (m.cfg.firmware.boot_spread_ms > 0) {
      RngStream rng(m.seed, "boot/" + label);
      offset = rng.uniform_int(0, m.cfg.firmware.boot_spread_ms * 1000 - 1);
    }
    m.sim.schedule(SimTime::from_us(offset), std::move(start));
  };
  for (auto& p : m.primaries) {
    PrimaryBoard* b = p.get();
    boot(m.channel.radio_name(b->radio()), [b] { b->start(); });
  }
  for (auto& s : m.secondaries) {
    SecondaryBoard* b = s.get();
    boot(m.channel.radio_name(b->radio()), [b] { b->start(); });
  }
  if (m.noise) {
    NoiseInjector* n = m.noise.get();
    const SimTime until = m.cfg.duration;
    boot(m.channel.radio_name(n->radio()), [n, until] { n->start(until); });
  }
  m.sim.run_until(m.cfg.duration + m.cfg.delay_bound);
}

const ServerLog& Network::server() const { return impl_->server; }
const Channel& Network::channel() const { return impl_->channel; }

const std::vector<NodeSchedule> Network::schedules() const {
  std::vector<NodeSchedule> out;
  for (const auto& p : impl_->primaries) out.push_back({p->node(), p->slots()});
  return out;
}

IterationMetrics Network::metrics() const {
  const Impl& m = *impl_;
  IterationMetrics out;
  out.seed = m.seed;
  const DedupResult dedup = deduplicate(m.server.raw());
  const auto sched = schedules();
  const SimTime bound = m.cfg.delay_bound;

  auto& v = out.values;
  std::uint64_t epochs = 0;
  for (const auto& s : sched) epochs += s.slots.size();
  v[metric::epochs] = static_cast<double>(epochs);
  if (epochs > 0) {
    const PrrPair prr = compute_prr(dedup.stream, sched, bound);
    v[metric::prr_redundant] = prr.redundant.ratio();
    v[metric::prr_primary_only] = prr.primary_only.ratio();
    try {
      v[metric::detection_rate] = compute_detection_rate(dedup.stream, sched, bound);
    } catch (const MetricError&) {
      // no faulty or missed epochs: undefined, left out
    }
  }
  v[metric::delay_violations] = static_cast<double>(delay_violations(dedup.stream, bound));
  v[metric::delay_violations_primary_only] = static_cast<double>(delay_violations(dedup.stream, bound, true));
  v[metric::max_gap_ms] = max_data_gap(dedup.stream).ms();
  v[metric::max_gap_primary_only_ms] = max_data_gap(dedup.stream, true).ms();
  v[metric::duplicates] = static_cast<double>(dedup.duplicates);
  v[metric::unique_packets] = static_cast<double>(dedup.stream.size());

  const ChannelStats& cs = m.channel.stats();
  v["transmissions"] = static_cast<double>(cs.transmissions);
  v["lost_collision"] = static_cast<double>(cs.lost_collision);
  v["lost_half_duplex"] = static_cast<double>(cs.lost_half_duplex);
  v["lost_sensitivity"] = static_cast<double>(cs.lost_sensitivity);

  MacStats mac{};
  std::uint64_t emergencies = 0;
  std::uint64_t recovery_reports = 0;
  for (const auto& p : m.primaries) {
    mac.data_sent += p->mac().stats().data_sent;
    mac.retransmissions += p->mac().stats().retransmissions;
    mac.acks += p->mac().stats().acks;
    mac.evictions += p->mac().stats().evictions;
    emergencies += p->emergencies();
    recovery_reports += p->recovery_reports();
  }
  v["primary_data_sent"] = static_cast<double>(mac.data_sent);
  v["retransmissions"] = static_cast<double>(mac.retransmissions);
  v["acks_received"] = static_cast<double>(mac.acks);
  v["queue_evictions"] = static_cast<double>(mac.evictions);
  v["emergencies"] = static_cast<double>(emergencies);
  v["recovery_reports"] = static_cast<double>(recovery_reports);

  SecondaryStats sec{};
  for (const auto& s : m.secondaries) {
    sec.heartbeats += s->stats().heartbeats;
    sec.backups += s->stats().backups;
    sec.correctives += s->stats().correctives;
  }
  v["secondary_heartbeats"] = static_cast<double>(sec.heartbeats);
  v["secondary_backups"] = static_cast<double>(sec.backups);
  v["secondary_correctives"] = static_cast<double>(sec.correctives);
  if (m.noise) v["noise_bursts"] = static_cast<double>(m.noise->bursts_sent());

  for (const auto& g : m.gateways) {
    auto& samples = out.rssi[g->name()];
    for (const auto& r : g->rx_log())
      if (r.packet.kind == PacketKind::data) samples.push_back(r.rssi_dbm);
  }

  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(m.digest));
  out.trace_digest = buf;
  return out;
}

IterationMetrics run_iteration(const ScenarioConfig& cfg, std::uint64_t seed) {
  Network net(cfg, seed);
  net.run();
  return net.metrics();
}

MetricsReport run_scenario(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds) {
  cfg.validate();
  MetricsReport report;
  report.scenario = cfg.name;
  std::vector<std::future<IterationMetrics>> jobs;
  jobs.reserve(seeds.size());
  for (const std::uint64_t s : seeds) jobs.push_back(std::async(std::launch::async, [&cfg, s] { return run_iteration(cfg, s); }));
  for (auto& j : jobs) report.iterations.push_back(j.get());
  return report;
}

MetricsReport run_scenario(const ScenarioConfig& cfg) {
  const auto seeds = cfg.effective_seeds();
  return run_scenario(cfg, seeds);
}

}  // namespace redmon
