#include "redmon/scenario.hpp"

#include <algorithm>
#include <set>

namespace redmon {

namespace {

template <typename Fn>
void wrap(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

ScenarioConfig base_module() {
  ScenarioConfig cfg;
  cfg.nodes.push_back(NodeConfig{});
  cfg.gateways.push_back(GatewayConfig{});
  return cfg;
}

FaultSpec board_fault(FaultKind kind) {
  FaultSpec f;
  f.kind = kind;
  f.node_id = 1;
  f.role = BoardRole::primary;
  if (kind != FaultKind::hard_failure) f.affected_sensor = SensorField::co2_ppm;
  return f;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (duration <= SimTime{}) throw ConfigError("duration_ms", "must be positive");
  if (iterations < 1) throw ConfigError("iterations", "must be at least 1");
  if (delay_bound <= SimTime{}) throw ConfigError("delay_bound_ms", "must be positive");
  if (nodes.empty()) throw ConfigError("nodes", "at least one node is required");
  if (gateways.empty()) throw ConfigError("gateways", "at least one gateway is required");
  if (channel.capture_threshold_db < 0.0) throw ConfigError("channel.capture_threshold_db", "must be >= 0");

  std::set<std::uint32_t> gw_ids;
  for (std::size_t i = 0; i < gateways.size(); ++i) {
    if (!gw_ids.insert(gateways[i].id).second)
      throw ConfigError("gateways." + std::to_string(i) + ".id", "duplicate gateway id");
    if (gateways[i].wall_loss_db < 0.0)
      throw ConfigError("gateways." + std::to_string(i) + ".wall_loss_db", "must be >= 0");
  }
  std::set<NodeId> node_ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string prefix = "nodes." + std::to_string(i);
    if (nodes[i].id == 0) throw ConfigError(prefix + ".id", "node ids start at 1");
    if (!node_ids.insert(nodes[i].id).second) throw ConfigError(prefix + ".id", "duplicate node id");
    if (!gw_ids.contains(nodes[i].home_gateway))
      throw ConfigError(prefix + ".home_gateway", "no gateway with id " + std::to_string(nodes[i].home_gateway));
  }

  wrap("lora", [&] { channel.lora.validate(); });
  wrap("channel", [&] { channel.path_loss.validate(); });
  wrap("mac", [&] { mac.validate(); });
  wrap("firmware", [&] { firmware.validate(mac); });
  wrap("thresholds", [&] { thresholds.validate(); });

  if (noise.enabled) {
    if (noise.source.period <= SimTime{}) throw ConfigError("noise.period_ms", "must be positive");
    if (noise.source.payload_bytes == 0) throw ConfigError("noise.payload_bytes", "must be positive");
    if (noise.source.jitter < SimTime{}) throw ConfigError("noise.jitter_ms", "must be >= 0");
    const SimTime air = time_on_air(noise.source.payload_bytes, channel.lora);
    if (noise.source.jitter * 2 > noise.source.period - air)
      throw ConfigError("noise.jitter_ms", "bursts could overlap; need 2*jitter <= period - airtime");
  }

  FaultPlan plan;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const std::string prefix = "faults." + std::to_string(i);
    const FaultSpec& f = faults[i];
    if (f.kind == FaultKind::gateway_failure) {
      if (!gw_ids.contains(f.gateway_id)) throw ConfigError(prefix + ".target", "no such gateway");
    } else {
      const auto node = std::find_if(nodes.begin(), nodes.end(), [&](const NodeConfig& n) { return n.id == f.node_id; });
      if (node == nodes.end()) throw ConfigError(prefix + ".target", "no such node");
      if (f.role == BoardRole::secondary && !node->has_secondary)
        throw ConfigError(prefix + ".target", "node has no secondary board");
    }
    wrap(prefix, [&] { plan.inject(f, duration); });
  }
}

std::vector<std::uint64_t> ScenarioConfig::effective_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < iterations; ++i) out.push_back(base_seed + static_cast<std::uint64_t>(i));
  return out;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return to_settings_text(*this) == to_settings_text(o);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "control-clean",    "baseline",         "HF",
      "SF1",              "SF2",              "GWF",
      "baseline-noSARB",  "HF-noSARB",        "SF1-noSARB",       "SF2-noSARB",
      "baseline-noRedundancy", "HF-noRedundancy", "SF1-noRedundancy", "SF2-noRedundancy",
      "GWF-noRedundancy",
  };
  return names;
}

ScenarioConfig expand_preset(const std::string& name) {
  std::string base = name;
  bool no_sarb = false;
  bool no_redundancy = false;
  if (const auto pos = name.find('-'); pos != std::string::npos && name != "control-clean") {
    base = name.substr(0, pos);
    const std::string variant = name.substr(pos + 1);
    if (variant == "noSARB") {
      no_sarb = true;
    } else if (variant == "noRedundancy") {
      no_redundancy = true;
    } else {
      throw ConfigError("preset", "unknown preset '" + name + "'");
    }
  }

  ScenarioConfig cfg = base_module();
  cfg.name = name;
  if (base == "control-clean") {
    cfg.noise.enabled = false;
  } else if (base == "baseline") {
    // standard noise load, no faults
  } else if (base == "HF") {
    cfg.faults.push_back(board_fault(FaultKind::hard_failure));
  } else if (base == "SF1") {
    cfg.faults.push_back(board_fault(FaultKind::sensor_read_failure));
  } else if (base == "SF2") {
    cfg.faults.push_back(board_fault(FaultKind::sensor_anomaly));
  } else if (base == "GWF") {
    // Backup gateway behind a wall in the neighbouring module.
    cfg.gateways.push_back(GatewayConfig{1, Position{0.0, 12.0}, 10.0});
    FaultSpec f;
    f.kind = FaultKind::gateway_failure;
    f.gateway_id = 0;
    cfg.faults.push_back(f);
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  if (no_sarb) {
    if (base == "GWF") throw ConfigError("preset", "unknown preset '" + name + "'");
    cfg.mac.enabled = false;
  }
  if (no_redundancy) {
    for (auto& n : cfg.nodes) n.has_secondary = false;
  }
  return cfg;
}

}  // namespace redmon
