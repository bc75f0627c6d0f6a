#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "redmon/lora.hpp"
#include "redmon/packet.hpp"
#include "redmon/rng.hpp"
#include "redmon/simulator.hpp"

namespace redmon {

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

double distance(Position a, Position b);

/// Log-distance path loss with Gaussian shadowing. Received power decides
/// sensitivity and capture; the reported RSSI is additionally clamped to the
/// AGC ceiling, which is what a gateway log shows.
struct PathLossModel {
  double exponent = 2.7;
  double reference_distance_m = 1.0;
  double reference_loss_db = 40.0;
  double shadowing_sigma_db = 2.0;
  double agc_ceiling_dbm = -98.0;
  double sensitivity_dbm = -120.0;

  /// Mean received power (no shadowing). Distances below the reference
  /// distance are floored to it.
  double mean_power_dbm(Position tx, Position rx, double tx_power_dbm,
                        double extra_loss_db = 0.0) const;
  double report(double power_dbm) const;
  void validate() const;
};

struct LinkSample {
  double power_dbm;     // physical received power
  double reported_dbm;  // AGC-limited RSSI
};

/// One shadowing draw on a link.
LinkSample rssi_at(const PathLossModel& model, Position tx, Position rx, double tx_power_dbm,
                   RngStream& rng, double extra_loss_db = 0.0);

struct ChannelConfig {
  LoraParams lora;
  PathLossModel path_loss;
  double capture_threshold_db = 6.0;
};

using RadioId = std::uint32_t;

struct Reception {
  RadioId source;
  SimTime start;
  SimTime end;
  double power_dbm;
  double rssi_dbm;
};

/// Receiving side of a radio. Called once per frame that survives resolution.
class RadioListener {
 public:
  virtual ~RadioListener() = default;
  virtual void on_frame(const Packet& packet, const Reception& rx) = 0;
};

class HalfDuplexError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ChannelTransmission {
  std::uint64_t id;
  RadioId source;
  Packet packet;
  SimTime start;
  SimTime airtime;
  double tx_power_dbm;
  Position position;
  std::vector<double> power_at;  // received power per radio index

  SimTime end() const { return start + airtime; }
};

struct ChannelStats {
  std::uint64_t transmissions = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost_collision = 0;
  std::uint64_t lost_half_duplex = 0;
  std::uint64_t lost_sensitivity = 0;
};

/// Shared single-frequency half-duplex medium. All transmissions are heard by
/// every registered listening radio; outcomes are resolved per receiver when
/// the frame ends.
class Channel {
 public:
  using TraceSink = std::function<void(const std::string&)>;

  Channel(Simulator& sim, ChannelConfig cfg, std::uint64_t master_seed);

  /// listener may be null for transmit-only radios (the noise board).
  /// extra_loss_db is added to every link touching this radio (walls).
  RadioId add_radio(std::string name, Position pos, double tx_power_dbm,
                    RadioListener* listener, double extra_loss_db = 0.0);

  const std::string& radio_name(RadioId id) const { return radios_.at(id).name; }
  Position radio_position(RadioId id) const { return radios_.at(id).position; }

  bool is_transmitting(RadioId id) const;
  SimTime busy_until(RadioId id) const { return radios_.at(id).busy_until; }

  /// Puts a frame on air from now() for its time-on-air. Throws
  /// HalfDuplexError if the source is already transmitting.
  std::uint64_t begin_transmission(RadioId source, Packet packet);

  SimTime airtime(std::uint32_t bytes) const { return time_on_air(bytes, cfg_.lora); }
  const ChannelConfig& config() const { return cfg_; }
  const ChannelStats& stats() const { return stats_; }
  Simulator& simulator() { return sim_; }

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }

 private:
  struct Radio {
    std::string name;
    Position position;
    double tx_power_dbm;
    RadioListener* listener;
    double extra_loss_db;
    SimTime busy_until{};
  };

  void resolve(std::uint64_t tx_id);
  void prune(SimTime horizon);
  RngStream& link_stream(RadioId from, RadioId to);

  Simulator& sim_;
  ChannelConfig cfg_;
  std::uint64_t master_seed_;
  std::vector<Radio> radios_;
  std::map<std::pair<RadioId, RadioId>, std::unique_ptr<RngStream>> link_rng_;
  std::vector<ChannelTransmission> on_air_;  // active and recently ended
  SimTime longest_airtime_{};
  std::uint64_t next_tx_id_ = 1;
  ChannelStats stats_;
  TraceSink trace_;
};

struct NoiseSource {
  SimTime period = SimTime::from_ms(500);
  std::uint32_t payload_bytes = 10;
  SimTime jitter = SimTime::from_ms(200);
  Position position{};
  double tx_power_dbm = -25.0;
};

/// Periodic interferer. Burst k is sent at k*period + U[-jitter, +jitter],
/// clamped to [0, until).
class NoiseInjector {
 public:
  NoiseInjector(Channel& channel, const NoiseSource& source, std::uint64_t master_seed,
                std::string name = "noise");

  /// Schedules bursts for the interval [now, until). Throws
  /// std::invalid_argument when the jitter could make bursts self-overlap.
  void start(SimTime until);
  std::uint64_t bursts_scheduled() const { return scheduled_; }
  std::uint64_t bursts_sent() const { return sent_; }
  RadioId radio() const { return radio_; }

 private:
  void schedule_burst(std::int64_t k);

  Channel& channel_;
  NoiseSource source_;
  RngStream rng_;
  RadioId radio_;
  SimTime origin_{};
  SimTime until_{};
  std::uint64_t scheduled_ = 0;
  std::uint64_t sent_ = 0;
};

}  // namespace redmon
