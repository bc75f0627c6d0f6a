#include <gtest/gtest.h>

#include "redmon/scenario.hpp"
#include "temp_file.hpp"

using namespace redmon;
using namespace redmon::literals;

namespace {

std::string error_key(const std::map<std::string, std::string>& settings) {
  try {
    apply_settings(settings);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST(Presets, AllNamesExpandAndValidate) {
  for (const auto& name : preset_names()) {
    const auto cfg = expand_preset(name);
    EXPECT_EQ(cfg.name, name);
    EXPECT_NO_THROW(cfg.validate()) << name;
  }
}

TEST(Presets, UnknownNamesAreRejected) {
  EXPECT_THROW(expand_preset("HF2"), ConfigError);
  EXPECT_THROW(expand_preset("HF-fast"), ConfigError);
  EXPECT_THROW(expand_preset("GWF-noSARB"), ConfigError);
}

TEST(Presets, VariantsOnlyDifferInTheirToggle) {
  const auto hf = expand_preset("HF");
  auto no_sarb = expand_preset("HF-noSARB");
  EXPECT_FALSE(no_sarb.mac.enabled);
  no_sarb.mac.enabled = true;
  no_sarb.name = hf.name;
  EXPECT_EQ(no_sarb, hf);
  const auto solo = expand_preset("HF-noRedundancy");
  EXPECT_FALSE(solo.nodes.at(0).has_secondary);
}

TEST(Presets, FaultScenariosUseTheCentralWindow) {
  for (const char* name : {"HF", "SF1", "SF2", "GWF"}) {
    const auto cfg = expand_preset(name);
    ASSERT_EQ(cfg.faults.size(), 1u) << name;
    EXPECT_EQ(cfg.faults[0].start, 5_min);
    EXPECT_EQ(cfg.faults[0].end, 25_min);
  }
  EXPECT_FALSE(expand_preset("control-clean").noise.enabled);
  EXPECT_TRUE(expand_preset("baseline").noise.enabled);
  EXPECT_EQ(expand_preset("GWF").gateways.size(), 2u);
}

TEST(ConfigLoader, UnknownKeyIsNamed) {
  EXPECT_EQ(error_key({{"noise.perod_ms", "500"}}), "noise.perod_ms");
  try {
    apply_settings({{"mac.bogus", "1"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mac.bogus"), std::string::npos);
  }
}

TEST(ConfigLoader, BadValuesNameTheirKey) {
  EXPECT_EQ(error_key({{"duration_ms", "abc"}}), "duration_ms");
  EXPECT_EQ(error_key({{"duration_ms", "0"}}), "duration_ms");
  EXPECT_EQ(error_key({{"noise.enabled", "maybe"}}), "noise.enabled");
  EXPECT_EQ(error_key({{"tx_power_dbm", "1.5x"}}), "tx_power_dbm");
  EXPECT_EQ(error_key({{"noise.jitter_ms", "300"}}), "noise.jitter_ms");
  EXPECT_EQ(error_key({{"faults.0.kind", "meltdown"}}), "faults.0.kind");
  EXPECT_EQ(error_key({{"faults.0.target", "toaster"}}), "faults.0.target");
  EXPECT_EQ(error_key({{"nodes.0.home_gateway", "9"}}), "nodes.0.home_gateway");
  EXPECT_EQ(error_key({{"preset", "nope"}}), "preset");
}

TEST(ConfigLoader, FlatTextWithComments) {
  const auto s = parse_settings("# scenario\npreset = HF   # hard failure\n\niterations = 4\n");
  EXPECT_EQ(s.size(), 2u);
  const auto cfg = apply_settings(s);
  EXPECT_EQ(cfg.iterations, 4);
  EXPECT_EQ(cfg.faults.size(), 1u);
}

TEST(ConfigLoader, DuplicateAndMalformedLines) {
  EXPECT_THROW(parse_settings("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_settings("just words\n"), ConfigError);
  EXPECT_THROW(parse_settings("{ \"a\": "), ConfigError);
}

TEST(ConfigLoader, JsonFlattensToDottedKeys) {
  const auto s = parse_settings(R"({"preset": "SF1", "seeds": [4, 5, 6], "noise": {"jitter_ms": 100},
                                    "faults": {"0": {"multiplier": 2.0}}})");
  EXPECT_EQ(s.at("noise.jitter_ms"), "100");
  const auto cfg = apply_settings(s);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 5, 6}));
  EXPECT_EQ(cfg.effective_seeds().size(), 3u);
  EXPECT_EQ(cfg.noise.source.jitter, 100_ms);
  EXPECT_DOUBLE_EQ(cfg.faults.at(0).anomaly_multiplier, 2.0);
}

TEST(ConfigLoader, ListsByIndex) {
  const auto cfg = apply_settings({{"gateways.count", "2"},
                                   {"gateways.1.id", "7"},
                                   {"gateways.1.y", "12"},
                                   {"nodes.0.home_gateway", "7"},
                                   {"faults.0.kind", "gateway_failure"},
                                   {"faults.0.target", "gateway7"}});
  ASSERT_EQ(cfg.gateways.size(), 2u);
  EXPECT_EQ(cfg.gateways[1].id, 7u);
  EXPECT_DOUBLE_EQ(cfg.gateways[1].position.y, 12.0);
  EXPECT_EQ(cfg.faults.at(0).gateway_id, 7u);
}

TEST(ConfigLoader, SettingsTextRoundTripsEveryPreset) {
  for (const auto& name : preset_names()) {
    const auto cfg = expand_preset(name);
    const auto back = apply_settings(parse_settings(to_settings_text(cfg)));
    EXPECT_EQ(back, cfg) << name;
    EXPECT_EQ(to_settings_text(back), to_settings_text(cfg));
  }
}

TEST(ConfigLoader, LoadsFilesAndPresets) {
  TempFile f("cfg.txt", "preset = baseline\nseeds = 9,10\n");
  const auto cfg = load_scenario(f.path());
  EXPECT_EQ(cfg.effective_seeds(), (std::vector<std::uint64_t>{9, 10}));
  EXPECT_EQ(load_scenario("GWF").name, "GWF");
  EXPECT_THROW(load_scenario("/nonexistent/file.cfg"), ConfigError);
}

TEST(ScenarioConfig, ValidationCatchesStructuralProblems) {
  auto cfg = expand_preset("baseline");
  cfg.nodes.push_back(cfg.nodes[0]);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = expand_preset("baseline");
  cfg.gateways.clear();
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = expand_preset("HF-noRedundancy");
  cfg.faults[0].role = BoardRole::secondary;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = expand_preset("HF");
  cfg.faults[0].end = 31_min;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(ScenarioConfig, SeedsDefaultToConsecutiveFromBase) {
  ScenarioConfig cfg = expand_preset("baseline");
  cfg.base_seed = 10;
  cfg.iterations = 3;
  EXPECT_EQ(cfg.effective_seeds(), (std::vector<std::uint64_t>{10, 11, 12}));
}
