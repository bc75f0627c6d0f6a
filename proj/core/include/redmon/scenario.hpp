#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "redmon/channel.hpp"
#include "redmon/firmware.hpp"
#include "redmon/metrics.hpp"
#include "redmon/sarb.hpp"

namespace redmon {

/// Configuration problems; `key()` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct NodeConfig {
  NodeId id = 1;
  Position position{2.0, 0.0};
  bool has_secondary = true;
  // Secondary board sits next to the primary in the same enclosure.
  std::optional<Position> secondary_position;
  std::uint32_t home_gateway = 0;

  Position secondary_at() const {
    return secondary_position.value_or(Position{position.x, position.y + 0.1});
  }
};

struct GatewayConfig {
  std::uint32_t id = 0;
  Position position{};
  double wall_loss_db = 0.0;
};

struct NoiseConfig {
  bool enabled = true;
  NoiseSource source{SimTime::from_ms(500), 10, SimTime::from_ms(225), Position{1.5, 0.5}, -25.0};
};

struct ScenarioConfig {
  std::string name = "custom";
  SimTime duration = SimTime::from_ms(1'800'000);
  int iterations = 3;
  std::uint64_t base_seed = 1;
  std::vector<std::uint64_t> seeds;  // overrides base_seed when non-empty
  double tx_power_dbm = -25.0;       // effective radiated power of nodes and gateways
  std::vector<NodeConfig> nodes;
  std::vector<GatewayConfig> gateways;
  std::vector<FaultSpec> faults;
  NoiseConfig noise;
  SarbConfig mac;
  ChannelConfig channel;
  FirmwareConfig firmware;
  ThresholdTable thresholds = ThresholdTable::defaults();
  SimTime delay_bound = kMonitoringDelayBound;

  /// Throws ConfigError naming the first invalid setting.
  void validate() const;

  /// seeds if given, otherwise base_seed, base_seed+1, ... (iterations of them).
  std::vector<std::uint64_t> effective_seeds() const;

  bool operator==(const ScenarioConfig& o) const;
};

/// Names accepted by expand_preset().
const std::vector<std::string>& preset_names();

/// One primary + one secondary board, one noise board and one home gateway
/// in a 4.4 m module; fault windows default to [5 min, 25 min) of 30 min.
/// Throws ConfigError for unknown names.
ScenarioConfig expand_preset(const std::string& name);

/// Applies flat `dotted.key = value` settings (a `preset` key, if present, is
/// expanded first). Unknown keys are rejected.
ScenarioConfig apply_settings(const std::map<std::string, std::string>& settings,
                              std::optional<ScenarioConfig> base = std::nullopt);

/// Parses flat key-value text ('#' comments) or, when the first non-blank
/// character is '{', a JSON object whose nesting flattens to dotted keys.
std::map<std::string, std::string> parse_settings(const std::string& text);

/// Loads a config file, or expands a preset when `path_or_preset` names one.
ScenarioConfig load_scenario(const std::string& path_or_preset);

/// Renders a config as flat key-value text that load_scenario() reads back.
std::string to_settings_text(const ScenarioConfig& cfg);

}  // namespace redmon
