#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "redmon/channel.hpp"

using namespace redmon;
using namespace redmon::literals;

namespace {

struct Sink : RadioListener {
  std::vector<std::pair<Packet, Reception>> got;
  void on_frame(const Packet& p, const Reception& rx) override { got.emplace_back(p, rx); }
};

ChannelConfig no_shadowing() {
  ChannelConfig c;
  c.path_loss.shadowing_sigma_db = 0.0;
  return c;
}

Packet frame(std::uint32_t seq, std::uint32_t bytes = 76) {
  Packet p;
  p.seq = seq;
  p.size_bytes = bytes;
  return p;
}

}  // namespace

TEST(PathLoss, LogDistanceValues) {
  const PathLossModel m;
  EXPECT_DOUBLE_EQ(m.mean_power_dbm({0, 0}, {1, 0}, -25.0), -65.0);
  EXPECT_NEAR(m.mean_power_dbm({0, 0}, {10, 0}, -25.0), -92.0, 1e-12);
  // Below the reference distance the loss is floored.
  EXPECT_DOUBLE_EQ(m.mean_power_dbm({0, 0}, {0.1, 0}, -25.0), -65.0);
  EXPECT_NEAR(m.mean_power_dbm({0, 0}, {10, 0}, -25.0, 10.0), -102.0, 1e-12);
}

TEST(PathLoss, ReportedRssiIsClampedToAgcCeiling) {
  const PathLossModel m;
  EXPECT_DOUBLE_EQ(m.report(-70.0), -98.0);
  EXPECT_DOUBLE_EQ(m.report(-104.5), -104.5);
}

TEST(PathLoss, RssiAtWithoutShadowingIsTheMean) {
  PathLossModel m;
  m.shadowing_sigma_db = 0.0;
  RngStream rng(1, "t");
  const auto s = rssi_at(m, {0, 0}, {20, 0}, -25.0, rng);
  EXPECT_DOUBLE_EQ(s.power_dbm, m.mean_power_dbm({0, 0}, {20, 0}, -25.0));
  EXPECT_DOUBLE_EQ(s.reported_dbm, s.power_dbm);
}

TEST(PathLoss, ShadowingHasConfiguredSpread) {
  const PathLossModel m;
  RngStream rng(3, "shadow");
  const double mean = m.mean_power_dbm({0, 0}, {30, 0}, -25.0);
  double sum = 0.0;
  double sq = 0.0;
  constexpr int n = 50'000;
  for (int i = 0; i < n; ++i) {
    const double d = rssi_at(m, {0, 0}, {30, 0}, -25.0, rng).power_dbm - mean;
    sum += d;
    sq += d * d;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(std::sqrt(sq / n), m.shadowing_sigma_db, 0.05);
}

TEST(Channel, DeliversCleanFrameWithClampedRssi) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink rx;
  const auto a = ch.add_radio("a", {0, 0}, -25.0, nullptr);
  ch.add_radio("b", {2, 0}, -25.0, &rx);
  sim.schedule(0_ms, [&] { ch.begin_transmission(a, frame(1)); });
  sim.run_until(1_s);
  ASSERT_EQ(rx.got.size(), 1u);
  const auto& r = rx.got[0].second;
  EXPECT_EQ(r.end - r.start, SimTime::from_us(138'496));
  EXPECT_NEAR(r.power_dbm, -65.0 - 27.0 * std::log10(2.0), 1e-9);
  EXPECT_DOUBLE_EQ(r.rssi_dbm, -98.0);
  EXPECT_EQ(ch.stats().delivered, 1u);
}

TEST(Channel, ReceiverThatIsTransmittingLosesTheFrame) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink ra, rb;
  const auto a = ch.add_radio("a", {0, 0}, -25.0, &ra);
  const auto b = ch.add_radio("b", {2, 0}, -25.0, &rb);
  sim.schedule(0_ms, [&] { ch.begin_transmission(a, frame(1)); });
  sim.schedule(50_ms, [&] { ch.begin_transmission(b, frame(2, 10)); });
  sim.run_until(1_s);
  EXPECT_TRUE(ra.got.empty());
  EXPECT_TRUE(rb.got.empty());
  EXPECT_EQ(ch.stats().lost_half_duplex, 2u);
}

TEST(Channel, SecondTransmissionFromBusyRadioThrows) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  const auto a = ch.add_radio("a", {0, 0}, -25.0, nullptr);
  sim.schedule(0_ms, [&] {
    ch.begin_transmission(a, frame(1));
    EXPECT_TRUE(ch.is_transmitting(a));
    EXPECT_THROW(ch.begin_transmission(a, frame(2)), HalfDuplexError);
  });
  sim.run_until(1_s);
  EXPECT_FALSE(ch.is_transmitting(a));
}

TEST(Channel, StrongFrameCapturesWeakOne) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink rx;
  const auto near = ch.add_radio("near", {1, 0}, -25.0, nullptr);
  const auto far = ch.add_radio("far", {20, 0}, -25.0, nullptr);
  ch.add_radio("rx", {0, 0}, -25.0, &rx);
  sim.schedule(0_ms, [&] { ch.begin_transmission(near, frame(1)); });
  sim.schedule(10_ms, [&] { ch.begin_transmission(far, frame(2)); });
  sim.run_until(1_s);
  ASSERT_EQ(rx.got.size(), 1u);
  EXPECT_EQ(rx.got[0].first.seq, 1u);
  EXPECT_EQ(ch.stats().lost_collision, 1u);
}

TEST(Channel, EqualPowerOverlapDestroysBoth) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink rx;
  const auto a = ch.add_radio("a", {3, 0}, -25.0, nullptr);
  const auto b = ch.add_radio("b", {-3, 0}, -25.0, nullptr);
  ch.add_radio("rx", {0, 0}, -25.0, &rx);
  sim.schedule(0_ms, [&] { ch.begin_transmission(a, frame(1)); });
  sim.schedule(138_ms, [&] { ch.begin_transmission(b, frame(2)); });
  sim.run_until(1_s);
  EXPECT_TRUE(rx.got.empty());
  EXPECT_EQ(ch.stats().lost_collision, 2u);
}

TEST(Channel, BackToBackFramesDoNotCollide) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink rx;
  const auto a = ch.add_radio("a", {3, 0}, -25.0, nullptr);
  const auto b = ch.add_radio("b", {-3, 0}, -25.0, nullptr);
  ch.add_radio("rx", {0, 0}, -25.0, &rx);
  sim.schedule(0_ms, [&] { ch.begin_transmission(a, frame(1)); });
  sim.schedule(SimTime::from_us(138'496), [&] { ch.begin_transmission(b, frame(2)); });
  sim.run_until(1_s);
  EXPECT_EQ(rx.got.size(), 2u);
}

TEST(Channel, BelowSensitivityIsLost) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink rx;
  const auto a = ch.add_radio("a", {0, 0}, -25.0, nullptr);
  ch.add_radio("rx", {200, 0}, -25.0, &rx);  // about -127 dBm
  sim.schedule(0_ms, [&] { ch.begin_transmission(a, frame(1)); });
  sim.run_until(1_s);
  EXPECT_TRUE(rx.got.empty());
  EXPECT_EQ(ch.stats().lost_sensitivity, 1u);
}

TEST(Channel, WallLossAppliesToLinksOfThatRadio) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  Sink rx;
  const auto a = ch.add_radio("a", {0, 0}, -25.0, nullptr);
  ch.add_radio("rx", {10, 0}, -25.0, &rx, 10.0);
  sim.schedule(0_ms, [&] { ch.begin_transmission(a, frame(1)); });
  sim.run_until(1_s);
  ASSERT_EQ(rx.got.size(), 1u);
  EXPECT_NEAR(rx.got[0].second.power_dbm, -102.0, 1e-9);
}

TEST(Channel, RandomOverlapsMatchReceptionOracle) {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> dist(1.0, 60.0);
  std::uniform_int_distribution<int> start_ms(0, 400);
  const ChannelConfig cfg = no_shadowing();
  for (int trial = 0; trial < 200; ++trial) {
    Simulator sim;
    Channel ch(sim, cfg, 1);
    Sink rx;
    ch.add_radio("rx", {0, 0}, -25.0, &rx);
    constexpr int k = 4;
    std::vector<Position> pos;
    std::vector<SimTime> start;
    for (int i = 0; i < k; ++i) {
      pos.push_back({dist(gen), 0.0});
      start.push_back(SimTime::from_ms(start_ms(gen)));
      const auto id = ch.add_radio("t" + std::to_string(i), pos.back(), -25.0, nullptr);
      const auto seq = static_cast<std::uint32_t>(i);
      sim.schedule(start.back(), [&ch, id, seq] { ch.begin_transmission(id, frame(seq)); });
    }
    sim.run_until(2_s);

    const SimTime air = time_on_air(76, cfg.lora);
    std::set<std::uint32_t> expected;
    for (int i = 0; i < k; ++i) {
      const double p = cfg.path_loss.mean_power_dbm(pos[i], {0, 0}, -25.0);
      std::vector<double> others;
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        const bool overlap = start[j] < start[i] + air && start[i] < start[j] + air;
        if (overlap) others.push_back(cfg.path_loss.mean_power_dbm(pos[j], {0, 0}, -25.0));
      }
      if (oracle::reception(p, others, false, cfg.path_loss.sensitivity_dbm, cfg.capture_threshold_db) ==
          oracle::Verdict::ok)
        expected.insert(static_cast<std::uint32_t>(i));
    }
    std::set<std::uint32_t> got;
    for (const auto& [p, r] : rx.got) got.insert(p.seq);
    ASSERT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(Noise, ThirtyMinutesAtHalfSecondPeriod) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  NoiseSource src;
  src.jitter = 225_ms;
  NoiseInjector noise(ch, src, 4);
  sim.schedule(0_ms, [&] { noise.start(30_min); });
  sim.run_until(31_min);
  EXPECT_EQ(noise.bursts_scheduled(), 3600u);
  EXPECT_GE(noise.bursts_sent(), 3598u);
  // 120 bursts of 41.216 ms per minute.
  const double airtime_per_min = 120.0 * ch.airtime(src.payload_bytes).ms();
  EXPECT_NEAR(airtime_per_min, 4945.92, 1e-9);
}

TEST(Noise, ZeroJitterIsStrictlyPeriodic) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  std::vector<std::int64_t> starts;
  ch.set_trace([&](const std::string& line) {
    if (line.find(" tx ") != std::string::npos) starts.push_back(std::stoll(line));
  });
  NoiseSource src;
  src.jitter = SimTime{};
  NoiseInjector noise(ch, src, 4);
  sim.schedule(0_ms, [&] { noise.start(10_s); });
  sim.run_until(11_s);
  ASSERT_EQ(starts.size(), 20u);
  for (std::size_t k = 0; k < starts.size(); ++k) EXPECT_EQ(starts[k], static_cast<std::int64_t>(k) * 500'000);
}

TEST(Noise, JitterStaysWithinBounds) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  std::vector<std::int64_t> starts;
  ch.set_trace([&](const std::string& line) {
    if (line.find(" tx ") != std::string::npos) starts.push_back(std::stoll(line));
  });
  NoiseSource src;
  src.jitter = 225_ms;
  NoiseInjector noise(ch, src, 8);
  sim.schedule(0_ms, [&] { noise.start(60_s); });
  sim.run_until(61_s);
  for (std::size_t i = 1; i + 1 < starts.size(); ++i) {
    const auto nominal = static_cast<std::int64_t>(i) * 500'000;
    EXPECT_LE(std::llabs(starts[i] - nominal), 225'000);
  }
}

TEST(Noise, ExcessiveJitterIsRejected) {
  Simulator sim;
  Channel ch(sim, no_shadowing(), 1);
  NoiseSource src;
  src.jitter = 240_ms;
  NoiseInjector noise(ch, src, 1);
  EXPECT_THROW(noise.start(10_s), std::invalid_argument);
}
