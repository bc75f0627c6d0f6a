#include "redmon/firmware.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace redmon {

// ---------------------------------------------------------------------------
// Thresholds and detection

ThresholdTable ThresholdTable::defaults() {
  ThresholdTable t{};
  t[SensorField::co2_ppm] = {400.0, 5000.0};
  t[SensorField::pressure_hpa] = {900.0, 1100.0};
  t[SensorField::o2_percent] = {19.0, 23.5};
  t[SensorField::co_ppm] = {0.0, 50.0};
  for (auto f : {SensorField::temp1_c, SensorField::temp2_c, SensorField::temp3_c, SensorField::temp4_c})
    t[f] = {10.0, 35.0};
  for (auto f : {SensorField::humidity1_pct, SensorField::humidity2_pct, SensorField::humidity3_pct,
                 SensorField::humidity4_pct})
    t[f] = {20.0, 80.0};
  return t;
}

void ThresholdTable::validate() const {
  for (auto f : all_fields()) {
    const auto& b = (*this)[f];
    const auto range = measurement_range(f);
    const std::string key = "thresholds." + std::string(field_name(f));
    if (!(b.lower < b.upper)) throw std::invalid_argument(key + ": lower must be < upper");
    if (b.lower < range.lower || b.upper > range.upper)
      throw std::invalid_argument(key + ": bounds must lie inside the sensor measurement range");
  }
}

bool check_thresholds(const SensorReading& reading, const ThresholdTable& thresholds) {
  for (auto f : all_fields()) {
    const auto& v = reading[f];
    if (!v) continue;
    if (*v < thresholds[f].lower || *v > thresholds[f].upper) return true;
  }
  return false;
}

std::vector<SensorField> detect_incomplete(const Packet& packet) {
  std::vector<SensorField> missing;
  for (auto f : all_fields()) {
    if (!packet.reading || !(*packet.reading)[f]) missing.push_back(f);
  }
  return missing;
}

std::vector<SensorField> detect_anomaly(const SensorReading& primary, const SensorReading& secondary,
                                        double bound) {
  constexpr double eps = 1e-9;
  std::vector<SensorField> flagged;
  for (auto f : all_fields()) {
    const auto& p = primary[f];
    const auto& s = secondary[f];
    if (!p || !s) continue;
    if (std::abs(*p - *s) / std::max(std::abs(*s), eps) > bound) flagged.push_back(f);
  }
  return flagged;
}

// ---------------------------------------------------------------------------
// Faults

std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::hard_failure: return "hard_failure";
    case FaultKind::sensor_read_failure: return "sensor_read_failure";
    case FaultKind::sensor_anomaly: return "sensor_anomaly";
    case FaultKind::gateway_failure: return "gateway_failure";
  }
  return "?";
}

std::optional<FaultKind> parse_fault_kind(std::string_view s) {
  for (auto k : {FaultKind::hard_failure, FaultKind::sensor_read_failure, FaultKind::sensor_anomaly,
                 FaultKind::gateway_failure}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

void FaultPlan::inject(const FaultSpec& spec, SimTime duration) {
  if (!(spec.start < spec.end)) throw std::invalid_argument("fault window must satisfy start < end");
  if (spec.start < SimTime{} || spec.end > duration)
    throw std::invalid_argument("fault window must lie inside the scenario duration");
  if ((spec.kind == FaultKind::sensor_read_failure || spec.kind == FaultKind::sensor_anomaly) &&
      !spec.affected_sensor)
    throw std::invalid_argument("sensor fault needs an affected sensor");
  if (spec.kind == FaultKind::hard_failure) {
    for (const auto& other : specs_) {
      if (other.kind == FaultKind::hard_failure && other.node_id == spec.node_id &&
          other.role == spec.role && other.start < spec.end && spec.start < other.end) {
        throw std::invalid_argument("overlapping hard failures on node " + std::to_string(spec.node_id) +
                                    " " + std::string(to_string(spec.role)));
      }
    }
  }
  specs_.push_back(spec);
}

bool FaultPlan::board_hard_failed(NodeId node, BoardRole role, SimTime t) const {
  return std::any_of(specs_.begin(), specs_.end(), [&](const FaultSpec& s) {
    return s.kind == FaultKind::hard_failure && s.targets_board(node, role) && s.active_at(t);
  });
}

bool FaultPlan::board_faulty(NodeId node, BoardRole role, SimTime t) const {
  return std::any_of(specs_.begin(), specs_.end(),
                     [&](const FaultSpec& s) { return s.targets_board(node, role) && s.active_at(t); });
}

bool FaultPlan::gateway_failed(std::uint32_t gateway, SimTime t) const {
  return std::any_of(specs_.begin(), specs_.end(), [&](const FaultSpec& s) {
    return s.kind == FaultKind::gateway_failure && s.gateway_id == gateway && s.active_at(t);
  });
}

bool FaultPlan::apply_sensor_faults(NodeId node, BoardRole role, SimTime t, SensorReading& reading) const {
  bool changed = false;
  for (const auto& s : specs_) {
    if (!s.targets_board(node, role) || !s.active_at(t) || !s.affected_sensor) continue;
    auto& v = reading[*s.affected_sensor];
    if (s.kind == FaultKind::sensor_read_failure) {
      v.reset();
      changed = true;
    } else if (s.kind == FaultKind::sensor_anomaly && v) {
      *v *= s.anomaly_multiplier;
      changed = true;
    }
  }
  return changed;
}

// ---------------------------------------------------------------------------
// Environment

double Environment::nominal(SensorField f) {
  switch (f) {
    case SensorField::co2_ppm: return 800.0;
    case SensorField::pressure_hpa: return 1013.0;
    case SensorField::o2_percent: return 20.9;
    case SensorField::co_ppm: return 5.0;
    case SensorField::temp1_c:
    case SensorField::temp2_c:
    case SensorField::temp3_c:
    case SensorField::temp4_c: return 22.0;
    default: return 45.0;
  }
}

Environment::Environment(std::uint64_t master_seed, NodeId node)
    : rng_(master_seed, "env/node" + std::to_string(node)) {
  for (auto f : all_fields()) value_[static_cast<std::size_t>(f)] = nominal(f);
}

void Environment::step() {
  for (auto f : all_fields()) {
    const double nom = nominal(f);
    const double lo = 0.95 * nom;
    const double hi = 1.05 * nom;
    double& v = value_[static_cast<std::size_t>(f)];
    v += rng_.normal(0.0, 0.002 * nom);
    if (v > hi) v = 2.0 * hi - v;
    if (v < lo) v = 2.0 * lo - v;
  }
  clock_ += SimTime::from_s(1);
}

SensorReading Environment::at(SimTime t) {
  while (clock_ + SimTime::from_s(1) <= t) step();
  SensorReading r;
  for (auto f : all_fields()) {
    double v = value_[static_cast<std::size_t>(f)];
    for (const auto& e : excursions_) {
      if (e.field == f && e.from <= t) v += e.offset;
    }
    r[f] = v;
  }
  return r;
}

void Environment::add_excursion(SensorField f, SimTime from, double offset) {
  excursions_.push_back({f, from, offset});
}

// ---------------------------------------------------------------------------
// Boards

void FirmwareConfig::validate(const SarbConfig& mac) const {
  if (sense_period_ms <= 0) throw std::invalid_argument("firmware.sense_period_ms must be positive");
  if (sense_delay_ms < 0) throw std::invalid_argument("firmware.sense_delay_ms must be >= 0");
  const std::int64_t max_interval = mac.enabled ? mac.slot_max_ms : mac.fixed_interval_ms;
  if (sensing_interval_ms <= max_interval)
    throw std::invalid_argument("firmware.sensing_interval_ms must exceed the maximum transmission interval");
  if (heartbeat_period_ms <= 0) throw std::invalid_argument("firmware.heartbeat_period_ms must be positive");
  if (heartbeat_bytes >= data_bytes)
    throw std::invalid_argument("firmware.heartbeat_bytes must be smaller than firmware.data_bytes");
  if (measurement_sigma_rel < 0.0) throw std::invalid_argument("firmware.measurement_sigma_rel must be >= 0");
  if (boot_spread_ms < 0) throw std::invalid_argument("firmware.boot_spread_ms must be >= 0");
}

namespace {

SensorReading measure(const SensorReading& truth, RngStream& rng, double sigma_rel) {
  SensorReading r = truth;
  for (auto f : all_fields()) {
    auto& v = r[f];
    if (!v) continue;
    if (sigma_rel > 0.0) *v *= 1.0 + rng.normal(0.0, sigma_rel);
    const auto range = measurement_range(f);
    *v = std::clamp(*v, range.lower, range.upper);
  }
  return r;
}

std::string board_label(NodeId node, BoardRole role) {
  return "node" + std::to_string(node) + "." + std::string(to_string(role));
}

}  // namespace

PrimaryBoard::PrimaryBoard(BoardContext ctx, NodeId node, Position pos, double tx_power_dbm,
                           SarbConfig mac)
    : ctx_(ctx),
      node_(node),
      radio_(ctx.channel.add_radio(board_label(node, BoardRole::primary), pos, tx_power_dbm, this)),
      mac_(mac, RngStream(ctx.master_seed, "mac/" + board_label(node, BoardRole::primary))),
      measure_rng_(ctx.master_seed, "measure/" + board_label(node, BoardRole::primary)) {}

bool PrimaryBoard::powered(SimTime t) const {
  return !ctx_.faults.board_hard_failed(node_, BoardRole::primary, t);
}

std::optional<SensorReading> PrimaryBoard::sense(SimTime t, bool* faulty) {
  if (!powered(t)) return std::nullopt;
  SensorReading r = measure(ctx_.environment.at(t), measure_rng_, ctx_.firmware.measurement_sigma_rel);
  const bool changed = ctx_.faults.apply_sensor_faults(node_, BoardRole::primary, t, r);
  if (faulty) *faulty = changed;
  return r;
}

void PrimaryBoard::start() {
  const SimTime now = ctx_.sim.now();
  // The first cycle has no preceding data slot, so its retx slots are unused.
  const SimTime first = mac_.schedule_next_data_slot(now).next_data_slot;
  if (first < ctx_.duration) ctx_.sim.schedule(first, [this] { on_data_slot(0); });
  const SimTime period = SimTime::from_ms(ctx_.firmware.sense_period_ms);
  if (now + period < ctx_.duration) ctx_.sim.schedule(now + period, [this] { on_sense_tick(); });
}

bool PrimaryBoard::check_power() {
  const bool up = powered(ctx_.sim.now());
  if (!up && !was_down_) {
    mac_.reset();
    deferred_.clear();
    in_emergency_ = false;
  }
  const bool restored = up && was_down_;
  was_down_ = !up;
  return restored;
}

void PrimaryBoard::on_data_slot(std::int64_t slot_index) {
  const SimTime now = ctx_.sim.now();
  const bool up = powered(now);
  slots_.push_back({now, up, ctx_.faults.board_faulty(node_, BoardRole::primary, now)});

  const CycleSchedule cycle = mac_.schedule_next_data_slot(now);
  if (cycle.next_data_slot < ctx_.duration) {
    const std::int64_t next = slot_index + 1;
    ctx_.sim.schedule(cycle.next_data_slot, [this, next] { on_data_slot(next); });
  }
  if (!up) return;
  for (SimTime t : cycle.retx_slots) {
    if (t < ctx_.duration) ctx_.sim.schedule(t, [this] { on_retx_slot(); });
  }

  bool faulty = false;
  auto reading = sense(now, &faulty);
  Packet p;
  p.kind = PacketKind::data;
  p.node_id = node_;
  p.board_role = BoardRole::primary;
  p.seq = next_seq_++;
  p.size_bytes = ctx_.firmware.data_bytes;
  p.emergency = reading && check_thresholds(*reading, ctx_.thresholds);
  p.reading = std::move(reading);
  p.truth_slot = slot_index;
  p.truth_faulty = faulty;
  transmit(std::move(p));
}

void PrimaryBoard::on_retx_slot() {
  if (!powered(ctx_.sim.now())) return;
  if (ctx_.channel.is_transmitting(radio_) || !deferred_.empty()) return;
  if (auto p = mac_.on_retx_slot()) transmit(std::move(*p));
}

void PrimaryBoard::on_sense_tick() {
  const SimTime now = ctx_.sim.now();
  const bool restored = check_power();
  const SimTime period = SimTime::from_ms(ctx_.firmware.sense_period_ms);
  if (now + period < ctx_.duration) ctx_.sim.schedule(now + period, [this] { on_sense_tick(); });
  bool faulty = false;
  auto reading = sense(now, &faulty);
  if (!reading) return;
  if (restored) send_unscheduled(*reading, faulty, false);
  const bool crossed = check_thresholds(*reading, ctx_.thresholds);
  if (crossed && !in_emergency_) on_emergency(*reading, faulty);
  in_emergency_ = crossed;
}

void PrimaryBoard::on_emergency(const SensorReading& reading, bool faulty) {
  ++emergencies_;
  send_unscheduled(reading, faulty, true);
}

void PrimaryBoard::send_unscheduled(const SensorReading& reading, bool faulty, bool emergency) {
  if (!emergency) ++recovery_reports_;
  Packet p;
  p.kind = PacketKind::data;
  p.node_id = node_;
  p.board_role = BoardRole::primary;
  p.seq = next_seq_++;
  p.size_bytes = ctx_.firmware.data_bytes;
  p.emergency = emergency;
  p.reading = reading;
  p.truth_faulty = faulty;
  transmit(std::move(p));
}

void PrimaryBoard::transmit(Packet packet) {
  if (ctx_.channel.is_transmitting(radio_)) {
    deferred_.push_back(std::move(packet));
    if (deferred_.size() == 1) {
      ctx_.sim.schedule(ctx_.channel.busy_until(radio_), [this] {
        if (!powered(ctx_.sim.now())) return;
        auto pending = std::move(deferred_);
        deferred_.clear();
        for (auto& p : pending) transmit(std::move(p));
      });
    }
    return;
  }
  const std::uint32_t seq = packet.seq;
  const SimTime now = ctx_.sim.now();
  ctx_.channel.begin_transmission(radio_, packet);
  if (auto deadline = mac_.on_transmit(packet, now)) {
    ctx_.sim.schedule(*deadline, [this, seq] {
      if (powered(ctx_.sim.now())) mac_.on_ack_timeout(seq, ctx_.sim.now());
    });
  }
}

void PrimaryBoard::on_frame(const Packet& packet, const Reception&) {
  if (packet.kind != PacketKind::ack || packet.node_id != node_ ||
      packet.board_role != BoardRole::primary)
    return;
  if (!powered(ctx_.sim.now())) return;
  mac_.on_ack(packet.acked_seq);
}

SecondaryBoard::SecondaryBoard(BoardContext ctx, NodeId node, Position pos, double tx_power_dbm)
    : ctx_(ctx),
      node_(node),
      radio_(ctx.channel.add_radio(board_label(node, BoardRole::secondary), pos, tx_power_dbm, this)),
      measure_rng_(ctx.master_seed, "measure/" + board_label(node, BoardRole::secondary)) {}

bool SecondaryBoard::powered(SimTime t) const {
  return !ctx_.faults.board_hard_failed(node_, BoardRole::secondary, t);
}

std::optional<SensorReading> SecondaryBoard::sense(SimTime t, bool* faulty) {
  if (!powered(t)) return std::nullopt;
  SensorReading r = measure(ctx_.environment.at(t), measure_rng_, ctx_.firmware.measurement_sigma_rel);
  const bool changed = ctx_.faults.apply_sensor_faults(node_, BoardRole::secondary, t, r);
  if (faulty) *faulty = changed;
  return r;
}

void SecondaryBoard::start() {
  const SimTime now = ctx_.sim.now();
  arm_watchdog(now + SimTime::from_ms(ctx_.firmware.sensing_interval_ms));
  const SimTime hb = now + SimTime::from_ms(ctx_.firmware.heartbeat_period_ms);
  if (hb < ctx_.duration) ctx_.sim.schedule(hb, [this] { on_heartbeat(); });
}

void SecondaryBoard::arm_watchdog(SimTime deadline) {
  watchdog_.cancel();
  watchdog_deadline_ = deadline;
  if (deadline < ctx_.duration) watchdog_ = ctx_.sim.schedule(deadline, [this] { on_watchdog(); });
}

void SecondaryBoard::on_watchdog() {
  const SimTime now = ctx_.sim.now();
  if (!powered(now)) {
    arm_watchdog(now + SimTime::from_ms(ctx_.firmware.sensing_interval_ms));
    return;
  }
  // Reading the sensors takes sense_delay before the backup can go out; the
  // watchdog is re-armed once it has been sent.
  ctx_.sim.schedule(now + SimTime::from_ms(ctx_.firmware.sense_delay_ms), [this] { send_data(std::nullopt); });
}

void SecondaryBoard::on_heartbeat() {
  const SimTime now = ctx_.sim.now();
  const SimTime next = now + SimTime::from_ms(ctx_.firmware.heartbeat_period_ms);
  if (next < ctx_.duration) ctx_.sim.schedule(next, [this] { on_heartbeat(); });
  if (!powered(now)) return;
  Packet p;
  p.kind = PacketKind::heartbeat;
  p.node_id = node_;
  p.board_role = BoardRole::secondary;
  p.seq = next_seq_++;
  p.size_bytes = ctx_.firmware.heartbeat_bytes;
  ++stats_.heartbeats;
  send(std::move(p));
}

void SecondaryBoard::send_data(std::optional<Correction> correction) {
  const bool corrective = correction.has_value();
  const SimTime now = ctx_.sim.now();
  if (!powered(now) || now >= ctx_.duration) return;
  bool faulty = false;
  auto reading = sense(now, &faulty);
  Packet p;
  p.kind = PacketKind::data;
  p.node_id = node_;
  p.board_role = BoardRole::secondary;
  p.seq = next_seq_++;
  p.size_bytes = ctx_.firmware.data_bytes;
  p.reading = std::move(reading);
  p.corrective = corrective;
  if (correction) {
    p.corrects_seq = correction->seq;
    p.truth_slot = correction->truth_slot;
  }
  p.truth_faulty = faulty;
  if (corrective) {
    ++stats_.correctives;
  } else {
    ++stats_.backups;
  }
  send(std::move(p));
  arm_watchdog(now + SimTime::from_ms(ctx_.firmware.sensing_interval_ms));
}

void SecondaryBoard::send(Packet packet) {
  if (ctx_.channel.is_transmitting(radio_)) {
    ctx_.sim.schedule(ctx_.channel.busy_until(radio_),
                      [this, p = std::move(packet)]() mutable {
                        if (powered(ctx_.sim.now())) send(std::move(p));
                      });
    return;
  }
  ctx_.channel.begin_transmission(radio_, std::move(packet));
}

void SecondaryBoard::on_frame(const Packet& packet, const Reception&) {
  const SimTime now = ctx_.sim.now();
  if (!powered(now)) return;
  if (packet.kind != PacketKind::data || packet.node_id != node_ ||
      packet.board_role != BoardRole::primary)
    return;
  ++stats_.overheard;
  const auto own = sense(now);
  const bool incomplete = !detect_incomplete(packet).empty();
  const bool anomalous = packet.reading && own && !detect_anomaly(*packet.reading, *own).empty();
  if ((incomplete || anomalous) && last_corrected_seq_ != packet.seq) {
    last_corrected_seq_ = packet.seq;
    const Correction c{packet.seq, packet.truth_slot};
    ctx_.sim.schedule(now + SimTime::from_ms(ctx_.firmware.sense_delay_ms), [this, c] { send_data(c); });
  }
  arm_watchdog(now + SimTime::from_ms(ctx_.firmware.sensing_interval_ms));
}

}  // namespace redmon
