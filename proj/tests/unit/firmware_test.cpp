#include <gtest/gtest.h>

#include "redmon/firmware.hpp"
#include "redmon/gateway.hpp"
#include "redmon/network.hpp"

using namespace redmon;
using namespace redmon::literals;

namespace {

SensorReading nominal_reading() {
  SensorReading r;
  for (auto f : all_fields()) r[f] = Environment::nominal(f);
  return r;
}

// One primary board and one home gateway on a quiet channel.
struct PrimaryRig {
  Simulator sim;
  ChannelConfig channel_cfg;
  Channel channel{sim, channel_cfg, 1};
  Environment env{1, 1};
  FaultPlan faults;
  ThresholdTable thresholds = ThresholdTable::defaults();
  FirmwareConfig firmware;
  ServerLog server;
  Gateway gateway{sim, channel, faults, 0, "gateway0", {0, 0}, -25.0, 0.0, 8, &server};
  PrimaryBoard board{BoardContext{sim, channel, env, faults, thresholds, firmware, 10_min, 1}, 1, {2, 0}, -25.0,
                     SarbConfig{}};

  PrimaryRig() { gateway.add_home_node(1); }
  void run() {
    sim.schedule(0_ms, [this] { board.start(); });
    sim.run_until(11_min);
  }
};

}  // namespace

TEST(Thresholds, NominalReadingIsQuiet) {
  EXPECT_FALSE(check_thresholds(nominal_reading(), ThresholdTable::defaults()));
}

TEST(Thresholds, AnyFieldOutsideBoundsTriggers) {
  const auto t = ThresholdTable::defaults();
  for (auto f : all_fields()) {
    SensorReading r = nominal_reading();
    r[f] = t[f].upper + 1.0;
    EXPECT_TRUE(check_thresholds(r, t)) << field_name(f);
    r[f] = t[f].lower - 1.0;
    EXPECT_TRUE(check_thresholds(r, t)) << field_name(f);
  }
}

TEST(Thresholds, AbsentFieldsNeverTrigger) {
  SensorReading r;  // every read failed
  EXPECT_FALSE(check_thresholds(r, ThresholdTable::defaults()));
}

TEST(Thresholds, DefaultTableIsValid) {
  EXPECT_NO_THROW(ThresholdTable::defaults().validate());
  auto t = ThresholdTable::defaults();
  t[SensorField::co2_ppm] = {5000.0, 400.0};
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(Detection, IncompleteListsMissingFields) {
  Packet p;
  p.reading = nominal_reading();
  EXPECT_TRUE(detect_incomplete(p).empty());
  (*p.reading)[SensorField::co2_ppm].reset();
  (*p.reading)[SensorField::temp3_c].reset();
  EXPECT_EQ(detect_incomplete(p), (std::vector<SensorField>{SensorField::co2_ppm, SensorField::temp3_c}));
  p.reading.reset();
  EXPECT_EQ(detect_incomplete(p).size(), kSensorFieldCount);
}

TEST(Detection, AnomalyFlagsOnlyLargeRelativeDeviation) {
  const SensorReading s = nominal_reading();
  SensorReading p = s;
  *p[SensorField::co2_ppm] *= 1.5;
  *p[SensorField::o2_percent] *= 1.2;
  EXPECT_EQ(detect_anomaly(p, s), (std::vector<SensorField>{SensorField::co2_ppm}));
  p[SensorField::co2_ppm].reset();  // absent on one side: skipped
  EXPECT_TRUE(detect_anomaly(p, s).empty());
}

TEST(Faults, PlanValidation) {
  FaultPlan plan;
  FaultSpec f;
  f.node_id = 1;
  f.start = 10_min;
  f.end = 5_min;
  EXPECT_THROW(plan.inject(f, 30_min), std::invalid_argument);
  f.start = 5_min;
  f.end = 31_min;
  EXPECT_THROW(plan.inject(f, 30_min), std::invalid_argument);
  f.end = 25_min;
  EXPECT_NO_THROW(plan.inject(f, 30_min));
  FaultSpec overlap = f;
  overlap.start = 20_min;
  overlap.end = 28_min;
  EXPECT_THROW(plan.inject(overlap, 30_min), std::invalid_argument);
  FaultSpec sensor;
  sensor.kind = FaultKind::sensor_read_failure;
  sensor.node_id = 1;
  EXPECT_THROW(plan.inject(sensor, 30_min), std::invalid_argument);
}

TEST(Faults, WindowIsHalfOpen) {
  FaultPlan plan;
  FaultSpec f;
  f.node_id = 1;
  plan.inject(f, 30_min);
  EXPECT_FALSE(plan.board_hard_failed(1, BoardRole::primary, 5_min - 1_ms));
  EXPECT_TRUE(plan.board_hard_failed(1, BoardRole::primary, 5_min));
  EXPECT_FALSE(plan.board_hard_failed(1, BoardRole::primary, 25_min));
  EXPECT_FALSE(plan.board_hard_failed(1, BoardRole::secondary, 10_min));
  EXPECT_FALSE(plan.board_hard_failed(2, BoardRole::primary, 10_min));
}

TEST(Faults, SensorFaultsChangeOnlyTheirField) {
  FaultPlan plan;
  FaultSpec miss;
  miss.kind = FaultKind::sensor_read_failure;
  miss.node_id = 1;
  miss.affected_sensor = SensorField::co2_ppm;
  plan.inject(miss, 30_min);
  FaultSpec skew;
  skew.kind = FaultKind::sensor_anomaly;
  skew.node_id = 1;
  skew.affected_sensor = SensorField::o2_percent;
  plan.inject(skew, 30_min);

  SensorReading r = nominal_reading();
  EXPECT_FALSE(plan.apply_sensor_faults(1, BoardRole::primary, 1_min, r));
  EXPECT_EQ(r, nominal_reading());
  EXPECT_TRUE(plan.apply_sensor_faults(1, BoardRole::primary, 10_min, r));
  EXPECT_FALSE(r[SensorField::co2_ppm].has_value());
  EXPECT_DOUBLE_EQ(*r[SensorField::o2_percent], 1.5 * Environment::nominal(SensorField::o2_percent));
  EXPECT_DOUBLE_EQ(*r[SensorField::pressure_hpa], Environment::nominal(SensorField::pressure_hpa));
}

TEST(Environment, StaysWithinFivePercentAndReplays) {
  Environment a(3, 1);
  Environment b(3, 1);
  for (int s = 0; s < 3600; s += 7) {
    const auto ra = a.at(SimTime::from_s(s));
    ASSERT_EQ(ra, b.at(SimTime::from_s(s)));
    for (auto f : all_fields()) {
      const double nom = Environment::nominal(f);
      ASSERT_GE(*ra[f], 0.95 * nom - 1e-9);
      ASSERT_LE(*ra[f], 1.05 * nom + 1e-9);
    }
  }
}

TEST(Environment, NominalReadingIsInsideThresholds) {
  EXPECT_FALSE(check_thresholds(nominal_reading(), ThresholdTable::defaults()));
}

TEST(PrimaryBoard, ThresholdCrossingSendsOneEmergency) {
  PrimaryRig rig;
  rig.env.add_excursion(SensorField::co2_ppm, 100_s, 6000.0);
  rig.run();
  EXPECT_EQ(rig.board.emergencies(), 1u);
  bool flagged = false;
  for (const auto& r : rig.server.raw())
    if (r.packet.emergency && r.packet.truth_slot < 0) flagged = true;
  EXPECT_TRUE(flagged);
}

TEST(PrimaryBoard, QuietEnvironmentSendsOnlyScheduledData) {
  PrimaryRig rig;
  rig.run();
  EXPECT_EQ(rig.board.emergencies(), 0u);
  EXPECT_EQ(rig.board.mac().stats().data_sent, rig.board.slots().size());
  EXPECT_EQ(rig.server.raw().size(), rig.board.slots().size());
  EXPECT_EQ(rig.gateway.acks_sent(), rig.board.slots().size());
}

TEST(PrimaryBoard, RecoveryReportFollowsPowerRestore) {
  PrimaryRig rig;
  FaultSpec f;
  f.node_id = 1;
  f.start = 2_min;
  f.end = 4_min;
  rig.faults.inject(f, 10_min);
  rig.run();
  EXPECT_EQ(rig.board.recovery_reports(), 1u);
  for (const auto& r : rig.server.raw()) {
    EXPECT_FALSE(r.time >= 2_min + 1_s && r.time < 4_min) << "frame while powered off at " << r.time.ms();
  }
  // The report arrives within one sense period of the restore.
  bool prompt = false;
  for (const auto& r : rig.server.raw())
    if (r.packet.truth_slot < 0 && r.time >= 4_min && r.time < 4_min + 2_s) prompt = true;
  EXPECT_TRUE(prompt);
}

TEST(FirmwareConfig, SensingIntervalMustExceedLongestSlot) {
  FirmwareConfig fw;
  fw.sensing_interval_ms = 30'000;
  EXPECT_THROW(fw.validate(SarbConfig{}), std::invalid_argument);
  fw.sensing_interval_ms = 35'000;
  EXPECT_NO_THROW(fw.validate(SarbConfig{}));
}

namespace {

ScenarioConfig quiet(const std::string& preset) {
  ScenarioConfig cfg = expand_preset(preset);
  cfg.noise.enabled = false;
  return cfg;
}

}  // namespace

TEST(SecondaryBoard, SilentWhilePrimaryIsHealthy) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = run_iteration(quiet("control-clean"), seed);
    EXPECT_EQ(m.at("secondary_backups"), 0.0);
    EXPECT_EQ(m.at("secondary_correctives"), 0.0);
  }
}

TEST(SecondaryBoard, HeartbeatEveryMinute) {
  const auto m = run_iteration(quiet("control-clean"), 3);
  // Boot lies in [0, 5 s); beats at boot + 60k s strictly before 30 min.
  EXPECT_EQ(m.at("secondary_heartbeats"), 29.0);
}

TEST(SecondaryBoard, BacksUpEvery38sWhilePrimaryIsDead) {
  ScenarioConfig cfg = quiet("HF");
  Network net(cfg, 2);
  net.run();
  std::vector<SimTime> backups;
  for (const auto& r : deduplicate(net.server().raw()).stream)
    if (r.packet.board_role == BoardRole::secondary && r.packet.kind == PacketKind::data) backups.push_back(r.time);
  ASSERT_GT(backups.size(), 25u);
  // Watchdog 35 s plus 3 s sensing delay, measured between consecutive backups.
  int spaced = 0;
  for (std::size_t i = 1; i < backups.size(); ++i)
    if ((backups[i] - backups[i - 1]) == 38_s) ++spaced;
  EXPECT_GE(spaced, static_cast<int>(backups.size()) - 3);
}

TEST(SecondaryBoard, CorrectsEveryIncompletePrimaryPacket) {
  const auto m = run_iteration(quiet("SF1"), 4);
  EXPECT_GT(m.at("secondary_correctives"), 30.0);
  EXPECT_DOUBLE_EQ(m.at(metric::prr_redundant), 1.0);
  EXPECT_DOUBLE_EQ(m.at(metric::detection_rate), 1.0);
}
