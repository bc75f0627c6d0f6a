#include "redmon/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace redmon {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

double PathLossModel::mean_power_dbm(Position tx, Position rx, double tx_power_dbm,
                                     double extra_loss_db) const {
  const double d = std::max(distance(tx, rx), reference_distance_m);
  return tx_power_dbm - reference_loss_db - 10.0 * exponent * std::log10(d / reference_distance_m) -
         extra_loss_db;
}

double PathLossModel::report(double power_dbm) const { return std::min(power_dbm, agc_ceiling_dbm); }

void PathLossModel::validate() const {
  if (!(reference_distance_m > 0.0)) throw std::invalid_argument("channel.reference_distance_m must be positive");
  if (!(exponent > 0.0)) throw std::invalid_argument("channel.path_loss_exponent must be positive");
  if (!(shadowing_sigma_db >= 0.0)) throw std::invalid_argument("channel.shadowing_sigma_db must be >= 0");
}

LinkSample rssi_at(const PathLossModel& model, Position tx, Position rx, double tx_power_dbm,
                   RngStream& rng, double extra_loss_db) {
  double p = model.mean_power_dbm(tx, rx, tx_power_dbm, extra_loss_db);
  if (model.shadowing_sigma_db > 0.0) p += rng.normal(0.0, model.shadowing_sigma_db);
  return {p, model.report(p)};
}

Channel::Channel(Simulator& sim, ChannelConfig cfg, std::uint64_t master_seed)
    : sim_(sim), cfg_(std::move(cfg)), master_seed_(master_seed) {
  cfg_.lora.validate();
  cfg_.path_loss.validate();
}

RadioId Channel::add_radio(std::string name, Position pos, double tx_power_dbm,
                           RadioListener* listener, double extra_loss_db) {
  radios_.push_back(Radio{std::move(name), pos, tx_power_dbm, listener, extra_loss_db});
  return static_cast<RadioId>(radios_.size() - 1);
}

bool Channel::is_transmitting(RadioId id) const { return radios_.at(id).busy_until > sim_.now(); }

RngStream& Channel::link_stream(RadioId from, RadioId to) {
  auto& slot = link_rng_[{from, to}];
  if (!slot) {
    slot = std::make_unique<RngStream>(master_seed_,
                                       "link/" + radios_[from].name + "->" + radios_[to].name);
  }
  return *slot;
}

std::uint64_t Channel::begin_transmission(RadioId source, Packet packet) {
  Radio& src = radios_.at(source);
  const SimTime now = sim_.now();
  if (src.busy_until > now) {
    throw HalfDuplexError(src.name + " is already transmitting");
  }
  const SimTime air = airtime(packet.size_bytes);
  ChannelTransmission tx{next_tx_id_++, source, std::move(packet), now, air, src.tx_power_dbm,
                         src.position, {}};
  tx.power_at.assign(radios_.size(), -std::numeric_limits<double>::infinity());
  for (RadioId r = 0; r < radios_.size(); ++r) {
    if (r == source || radios_[r].listener == nullptr) continue;
    const double loss = src.extra_loss_db + radios_[r].extra_loss_db;
    tx.power_at[r] = rssi_at(cfg_.path_loss, src.position, radios_[r].position, src.tx_power_dbm,
                             link_stream(source, r), loss)
                         .power_dbm;
  }
  src.busy_until = tx.end();
  longest_airtime_ = std::max(longest_airtime_, air);
  ++stats_.transmissions;

  if (trace_) {
    std::ostringstream os;
    os << now.us() << " tx " << src.name << ' ' << to_string(tx.packet.kind) << " seq=" << tx.packet.seq
       << " air=" << air.us();
    trace_(os.str());
  }

  const std::uint64_t id = tx.id;
  const SimTime end = tx.end();
  on_air_.push_back(std::move(tx));
  sim_.schedule(end, [this, id] { resolve(id); });
  return id;
}

void Channel::prune(SimTime horizon) {
  std::erase_if(on_air_, [horizon](const ChannelTransmission& t) { return t.end() < horizon; });
}

void Channel::resolve(std::uint64_t tx_id) {
  const auto it = std::find_if(on_air_.begin(), on_air_.end(),
                               [tx_id](const ChannelTransmission& t) { return t.id == tx_id; });
  if (it == on_air_.end()) return;
  // Copy: listeners may start new transmissions, which reallocates on_air_.
  const ChannelTransmission frame = *it;

  std::vector<const ChannelTransmission*> overlapping;
  for (const auto& other : on_air_) {
    if (other.id == frame.id) continue;
    if (other.start < frame.end() && other.end() > frame.start) overlapping.push_back(&other);
  }

  struct Outcome {
    RadioId rx;
    Reception reception;
  };
  std::vector<Outcome> delivered;
  for (RadioId r = 0; r < radios_.size(); ++r) {
    if (r == frame.source || radios_[r].listener == nullptr) continue;
    const double power = frame.power_at[r];
    bool self_tx = false;
    double strongest_other = -std::numeric_limits<double>::infinity();
    for (const auto* o : overlapping) {
      if (o->source == r) {
        self_tx = true;
        break;
      }
      strongest_other = std::max(strongest_other, o->power_at[r]);
    }
    const char* verdict = "ok";
    if (self_tx) {
      ++stats_.lost_half_duplex;
      verdict = "halfduplex";
    } else if (power < cfg_.path_loss.sensitivity_dbm) {
      ++stats_.lost_sensitivity;
      verdict = "weak";
    } else if (power - strongest_other < cfg_.capture_threshold_db) {
      ++stats_.lost_collision;
      verdict = "collision";
    } else {
      ++stats_.delivered;
      delivered.push_back(
          {r, Reception{frame.source, frame.start, frame.end(), power, cfg_.path_loss.report(power)}});
    }
    if (trace_) {
      std::ostringstream os;
      os << frame.end().us() << " rx " << radios_[r].name << " <- " << radios_[frame.source].name
         << ' ' << verdict;
      trace_(os.str());
    }
  }

  if (longest_airtime_ < sim_.now()) prune(sim_.now() - longest_airtime_);

  for (const auto& d : delivered) radios_[d.rx].listener->on_frame(frame.packet, d.reception);
}

NoiseInjector::NoiseInjector(Channel& channel, const NoiseSource& source, std::uint64_t master_seed,
                             std::string name)
    : channel_(channel),
      source_(source),
      rng_(master_seed, "noise/" + name),
      radio_(channel.add_radio(std::move(name), source.position, source.tx_power_dbm, nullptr)) {}

void NoiseInjector::start(SimTime until) {
  if (source_.period.us() <= 0) throw std::invalid_argument("noise.period_ms must be positive");
  const SimTime air = channel_.airtime(source_.payload_bytes);
  if ((source_.jitter * 2).us() > (source_.period - air).us()) {
    throw std::invalid_argument("noise.jitter_ms must be at most (period - airtime) / 2");
  }
  origin_ = channel_.simulator().now();
  until_ = until;
  for (std::int64_t k = 0; origin_ + source_.period * k < until_; ++k) schedule_burst(k);
}

void NoiseInjector::schedule_burst(std::int64_t k) {
  std::int64_t offset = 0;
  if (source_.jitter.us() > 0) offset = rng_.uniform_int(-source_.jitter.us(), source_.jitter.us());
  SimTime t = origin_ + source_.period * k + SimTime::from_us(offset);
  t = std::clamp(t, origin_, until_ - SimTime::from_us(1));
  ++scheduled_;
  channel_.simulator().schedule(t, [this, k] {
    Packet p;
    p.kind = PacketKind::noise;
    p.seq = static_cast<std::uint32_t>(k);
    p.size_bytes = source_.payload_bytes;
    // Clamping at the run edges can push a burst onto its neighbour.
    if (channel_.is_transmitting(radio_)) return;
    channel_.begin_transmission(radio_, std::move(p));
    ++sent_;
  });
}

}  // namespace redmon
