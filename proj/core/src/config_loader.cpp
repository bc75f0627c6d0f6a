#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "redmon/scenario.hpp"

namespace redmon {

namespace {

using Json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

SimTime to_ms(const std::string& key, const std::string& v) {
  return SimTime::from_ms(to_int<std::int64_t>(key, v));
}

std::string fmt_ms(SimTime t) {
  if (t.us() % 1000 == 0) return std::to_string(t.us() / 1000);
  return fmt_double(static_cast<double>(t.us()) / 1000.0);
}

// Accessor for one setting of some object type T.
template <typename T>
struct Setting {
  std::function<void(T&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const T&)> get;
};

template <typename T>
using Registry = std::vector<std::pair<std::string, Setting<T>>>;

#define INT_SETTING(T, name, member, Int)                                                          \
  {name, Setting<T>{[](T& o, const std::string& k, const std::string& v) { o.member = to_int<Int>(k, v); }, \
                    [](const T& o) { return std::to_string(o.member); }}}
#define DBL_SETTING(T, name, member)                                                                   \
  {name, Setting<T>{[](T& o, const std::string& k, const std::string& v) { o.member = to_double(k, v); }, \
                    [](const T& o) { return fmt_double(o.member); }}}
#define BOOL_SETTING(T, name, member)                                                                \
  {name, Setting<T>{[](T& o, const std::string& k, const std::string& v) { o.member = to_bool(k, v); }, \
                    [](const T& o) { return fmt_bool(o.member); }}}
#define MS_SETTING(T, name, member)                                                                \
  {name, Setting<T>{[](T& o, const std::string& k, const std::string& v) { o.member = to_ms(k, v); }, \
                    [](const T& o) { return fmt_ms(o.member); }}}

const Registry<ScenarioConfig>& scalar_settings() {
  using C = ScenarioConfig;
  static const Registry<C> reg = [] {
    Registry<C> r = {
        {"name", {[](C& c, const std::string&, const std::string& v) { c.name = v; },
                  [](const C& c) { return c.name; }}},
        MS_SETTING(C, "duration_ms", duration),
        INT_SETTING(C, "iterations", iterations, int),
        INT_SETTING(C, "base_seed", base_seed, std::uint64_t),
        {"seeds", {[](C& c, const std::string& k, const std::string& v) {
                     c.seeds.clear();
                     std::stringstream ss(v);
                     std::string item;
                     while (std::getline(ss, item, ',')) {
                       item = trim(item);
                       if (!item.empty()) c.seeds.push_back(to_int<std::uint64_t>(k, item));
                     }
                     if (!c.seeds.empty()) c.iterations = static_cast<int>(c.seeds.size());
                   },
                   [](const C& c) {
                     std::string out;
                     for (std::size_t i = 0; i < c.seeds.size(); ++i) out += (i ? "," : "") + std::to_string(c.seeds[i]);
                     return out;
                   }}},
        DBL_SETTING(C, "tx_power_dbm", tx_power_dbm),
        MS_SETTING(C, "delay_bound_ms", delay_bound),

        BOOL_SETTING(C, "noise.enabled", noise.enabled),
        MS_SETTING(C, "noise.period_ms", noise.source.period),
        INT_SETTING(C, "noise.payload_bytes", noise.source.payload_bytes, std::uint32_t),
        MS_SETTING(C, "noise.jitter_ms", noise.source.jitter),
        DBL_SETTING(C, "noise.x", noise.source.position.x),
        DBL_SETTING(C, "noise.y", noise.source.position.y),
        DBL_SETTING(C, "noise.tx_power_dbm", noise.source.tx_power_dbm),

        BOOL_SETTING(C, "mac.enabled", mac.enabled),
        INT_SETTING(C, "mac.slot_min_ms", mac.slot_min_ms, std::int64_t),
        INT_SETTING(C, "mac.slot_max_ms", mac.slot_max_ms, std::int64_t),
        INT_SETTING(C, "mac.slot_step_ms", mac.slot_step_ms, std::int64_t),
        INT_SETTING(C, "mac.retx_interval_ms", mac.retx_interval_ms, std::int64_t),
        INT_SETTING(C, "mac.retx_slots", mac.retx_slots_per_cycle, int),
        INT_SETTING(C, "mac.queue_capacity", mac.queue_capacity, std::size_t),
        INT_SETTING(C, "mac.ack_timeout_ms", mac.ack_timeout_ms, std::int64_t),
        INT_SETTING(C, "mac.ack_bytes", mac.ack_bytes, std::uint32_t),
        INT_SETTING(C, "mac.fixed_interval_ms", mac.fixed_interval_ms, std::int64_t),

        INT_SETTING(C, "lora.spreading_factor", channel.lora.spreading_factor, int),
        INT_SETTING(C, "lora.bandwidth_hz", channel.lora.bandwidth_hz, int),
        INT_SETTING(C, "lora.coding_rate_denominator", channel.lora.coding_rate_denominator, int),
        INT_SETTING(C, "lora.preamble_symbols", channel.lora.preamble_symbols, int),
        BOOL_SETTING(C, "lora.explicit_header", channel.lora.explicit_header),
        BOOL_SETTING(C, "lora.crc", channel.lora.crc_on),
        BOOL_SETTING(C, "lora.low_data_rate_optimize", channel.lora.low_data_rate_optimize),
        DBL_SETTING(C, "lora.frequency_mhz", channel.lora.frequency_mhz),

        DBL_SETTING(C, "channel.path_loss_exponent", channel.path_loss.exponent),
        DBL_SETTING(C, "channel.reference_distance_m", channel.path_loss.reference_distance_m),
        DBL_SETTING(C, "channel.reference_loss_db", channel.path_loss.reference_loss_db),
        DBL_SETTING(C, "channel.shadowing_sigma_db", channel.path_loss.shadowing_sigma_db),
        DBL_SETTING(C, "channel.agc_ceiling_dbm", channel.path_loss.agc_ceiling_dbm),
        DBL_SETTING(C, "channel.sensitivity_dbm", channel.path_loss.sensitivity_dbm),
        DBL_SETTING(C, "channel.capture_threshold_db", channel.capture_threshold_db),

        INT_SETTING(C, "firmware.sense_period_ms", firmware.sense_period_ms, std::int64_t),
        INT_SETTING(C, "firmware.sense_delay_ms", firmware.sense_delay_ms, std::int64_t),
        INT_SETTING(C, "firmware.sensing_interval_ms", firmware.sensing_interval_ms, std::int64_t),
        INT_SETTING(C, "firmware.heartbeat_period_ms", firmware.heartbeat_period_ms, std::int64_t),
        INT_SETTING(C, "firmware.data_bytes", firmware.data_bytes, std::uint32_t),
        INT_SETTING(C, "firmware.heartbeat_bytes", firmware.heartbeat_bytes, std::uint32_t),
        DBL_SETTING(C, "firmware.measurement_sigma_rel", firmware.measurement_sigma_rel),
        INT_SETTING(C, "firmware.boot_spread_ms", firmware.boot_spread_ms, std::int64_t),
    };
    for (SensorField f : all_fields()) {
      const std::string base = "thresholds." + std::string(field_name(f));
      r.push_back({base + ".lower", {[f](C& c, const std::string& k, const std::string& v) { c.thresholds[f].lower = to_double(k, v); },
                                     [f](const C& c) { return fmt_double(c.thresholds[f].lower); }}});
      r.push_back({base + ".upper", {[f](C& c, const std::string& k, const std::string& v) { c.thresholds[f].upper = to_double(k, v); },
                                     [f](const C& c) { return fmt_double(c.thresholds[f].upper); }}});
    }
    return r;
  }();
  return reg;
}

const Registry<NodeConfig>& node_settings() {
  using N = NodeConfig;
  static const Registry<N> reg = {
      INT_SETTING(N, "id", id, NodeId),
      DBL_SETTING(N, "x", position.x),
      DBL_SETTING(N, "y", position.y),
      BOOL_SETTING(N, "has_secondary", has_secondary),
      {"secondary_x", {[](N& n, const std::string& k, const std::string& v) {
                         n.secondary_position = Position{to_double(k, v), n.secondary_at().y};
                       },
                       [](const N& n) { return fmt_double(n.secondary_at().x); }}},
      {"secondary_y", {[](N& n, const std::string& k, const std::string& v) {
                         n.secondary_position = Position{n.secondary_at().x, to_double(k, v)};
                       },
                       [](const N& n) { return fmt_double(n.secondary_at().y); }}},
      INT_SETTING(N, "home_gateway", home_gateway, std::uint32_t),
  };
  return reg;
}

const Registry<GatewayConfig>& gateway_settings() {
  using G = GatewayConfig;
  static const Registry<G> reg = {
      INT_SETTING(G, "id", id, std::uint32_t),
      DBL_SETTING(G, "x", position.x),
      DBL_SETTING(G, "y", position.y),
      DBL_SETTING(G, "wall_loss_db", wall_loss_db),
  };
  return reg;
}

std::string fault_target(const FaultSpec& f) {
  if (f.kind == FaultKind::gateway_failure) return "gateway" + std::to_string(f.gateway_id);
  return "node" + std::to_string(f.node_id) + "." + std::string(to_string(f.role));
}

void set_fault_target(FaultSpec& f, const std::string& key, const std::string& v) {
  if (v.rfind("gateway", 0) == 0) {
    f.gateway_id = to_int<std::uint32_t>(key, v.substr(7));
    return;
  }
  const auto dot = v.find('.');
  if (v.rfind("node", 0) != 0 || dot == std::string::npos)
    throw ConfigError(key, "expected nodeN.primary, nodeN.secondary or gatewayN, got '" + v + "'");
  f.node_id = to_int<NodeId>(key, v.substr(4, dot - 4));
  const std::string role = v.substr(dot + 1);
  if (role == "primary") {
    f.role = BoardRole::primary;
  } else if (role == "secondary") {
    f.role = BoardRole::secondary;
  } else {
    throw ConfigError(key, "unknown board '" + role + "'");
  }
}

const Registry<FaultSpec>& fault_settings() {
  using F = FaultSpec;
  static const Registry<F> reg = {
      {"kind", {[](F& f, const std::string& k, const std::string& v) {
                  const auto kind = parse_fault_kind(v);
                  if (!kind) throw ConfigError(k, "unknown fault kind '" + v + "'");
                  f.kind = *kind;
                },
                [](const F& f) { return std::string(to_string(f.kind)); }}},
      {"target", {set_fault_target, fault_target}},
      {"sensor", {[](F& f, const std::string& k, const std::string& v) {
                    if (v.empty() || v == "none") {
                      f.affected_sensor.reset();
                      return;
                    }
                    const auto field = parse_field(v);
                    if (!field) throw ConfigError(k, "unknown sensor '" + v + "'");
                    f.affected_sensor = *field;
                  },
                  [](const F& f) { return f.affected_sensor ? std::string(field_name(*f.affected_sensor)) : "none"; }}},
      MS_SETTING(F, "start_ms", start),
      MS_SETTING(F, "end_ms", end),
      DBL_SETTING(F, "multiplier", anomaly_multiplier),
  };
  return reg;
}

#undef INT_SETTING
#undef DBL_SETTING
#undef BOOL_SETTING
#undef MS_SETTING

template <typename T>
const Setting<T>* find(const Registry<T>& reg, const std::string& name) {
  for (const auto& [n, s] : reg)
    if (n == name) return &s;
  return nullptr;
}

template <typename T>
bool apply_list(std::vector<T>& list, const Registry<T>& reg, const std::string& key, const std::string& rest,
                const std::string& value) {
  if (rest == "count") {
    list.resize(to_int<std::size_t>(key, value));
    return true;
  }
  const auto dot = rest.find('.');
  if (dot == std::string::npos) return false;
  const auto* s = find(reg, rest.substr(dot + 1));
  if (!s) return false;
  const auto index = to_int<std::size_t>(key, rest.substr(0, dot));
  if (index > 1000) throw ConfigError(key, "list index too large");
  if (index >= list.size()) list.resize(index + 1);
  s->set(list[index], key, value);
  return true;
}

void apply_one(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (const auto* s = find(scalar_settings(), key)) {
    s->set(cfg, key, value);
    return;
  }
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    const std::string head = key.substr(0, dot);
    const std::string rest = key.substr(dot + 1);
    bool ok = false;
    if (head == "nodes") ok = apply_list(cfg.nodes, node_settings(), key, rest, value);
    if (head == "gateways") ok = apply_list(cfg.gateways, gateway_settings(), key, rest, value);
    if (head == "faults") ok = apply_list(cfg.faults, fault_settings(), key, rest, value);
    if (ok) return;
  }
  throw ConfigError(key, "unknown configuration key");
}

void flatten(const Json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (j.is_array()) {
    const bool scalars = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    if (scalars) {
      std::string joined;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) joined += ",";
        joined += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
      }
      out[prefix] = joined;
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    }
    return;
  }
  if (j.is_string()) {
    out[prefix] = j.get<std::string>();
  } else if (j.is_null()) {
    out[prefix] = "none";
  } else {
    out[prefix] = j.dump();
  }
}

}  // namespace

std::map<std::string, std::string> parse_settings(const std::string& text) {
  std::map<std::string, std::string> out;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const Json::parse_error& e) {
      throw ConfigError("", std::string("malformed JSON config: ") + e.what());
    }
    flatten(j, "", out);
    return out;
  }
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    if (out.contains(key)) throw ConfigError(key, "set twice");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ScenarioConfig apply_settings(const std::map<std::string, std::string>& settings,
                              std::optional<ScenarioConfig> base) {
  ScenarioConfig cfg;
  if (const auto it = settings.find("preset"); it != settings.end()) {
    cfg = expand_preset(it->second);
  } else if (base) {
    cfg = std::move(*base);
  } else {
    cfg.nodes.push_back(NodeConfig{});
    cfg.gateways.push_back(GatewayConfig{});
  }
  // List sizes first so indexed keys refer to the resized lists.
  for (const auto& [key, value] : settings) {
    if (key.size() > 6 && key.ends_with(".count")) apply_one(cfg, key, value);
  }
  for (const auto& [key, value] : settings) {
    if (key == "preset" || (key.size() > 6 && key.ends_with(".count"))) continue;
    apply_one(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path_or_preset) {
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), path_or_preset) != names.end()) {
    ScenarioConfig cfg = expand_preset(path_or_preset);
    cfg.validate();
    return cfg;
  }
  std::ifstream in(path_or_preset);
  if (!in) throw ConfigError("", "'" + path_or_preset + "' is neither a preset nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_settings(parse_settings(ss.str()));
}

std::string to_settings_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  for (const auto& [name, s] : scalar_settings()) {
    if (name == "seeds" && cfg.seeds.empty()) continue;
    out << name << " = " << s.get(cfg) << '\n';
  }
  const auto emit = [&out](const std::string& head, const auto& list, const auto& reg) {
    out << head << ".count = " << list.size() << '\n';
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (const auto& [name, s] : reg) out << head << '.' << i << '.' << name << " = " << s.get(list[i]) << '\n';
    }
  };
  emit("nodes", cfg.nodes, node_settings());
  emit("gateways", cfg.gateways, gateway_settings());
  emit("faults", cfg.faults, fault_settings());
  return out.str();
}

}  // namespace redmon
