#include <gtest/gtest.h>

#include "nas/fixtures.hpp"

using namespace nas;

class Catalog : public ::testing::TestWithParam<std::string> {};

TEST_P(Catalog, EveryExpectationHolds) {
  const ExperimentReport r = run_fixture(GetParam());
  for (const auto& c : r.report["checks"]) {
    EXPECT_TRUE(c.value("pass", true)) << c["id"].get<std::string>() << ": " << c["mismatch"].dump() << "\n"
                                       << c["verdict"].dump();
  }
  EXPECT_TRUE(r.all_pass);
  EXPECT_EQ(r.report["config_hash"].get<std::string>().size(), 16u);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Catalog, ::testing::ValuesIn(list_fixtures()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& c : s)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return s;
                         });

TEST(Catalog, CoversTheExamples) {
  const auto names = list_fixtures();
  EXPECT_GE(names.size(), 11u);
  EXPECT_THROW(run_fixture("no-such-fixture"), ConfigError);
}

TEST(Config, ErrorsNameTheField) {
  const Json bad = parse_config(R"({"schema": 1, "space": {"kind": "CircleGrid", "n": 1},
      "systems": {"F": {"type": "autonomous", "map": {"kind": "Identity"}}},
      "checks": [{"checker": "expansivity", "params": {"system": "F"}}]})",
                                "inline");
  try {
    run_experiment(bad);
    FAIL() << "expected a config error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "space.n");
  }
  try {
    parse_config("{\n  \"schema\": 1,\n  oops\n}", "cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field().rfind("cfg:3:", 0), 0u) << e.field();
  }
  const Json noseed = parse_config(R"({"schema": 1, "space": {"kind": "CircleGrid", "n": 16},
      "systems": {"F": {"type": "autonomous", "map": {"kind": "Identity"}}},
      "checks": [{"checker": "mean_equicontinuity", "params": {"system": "F"}}]})",
                                   "inline");
  EXPECT_THROW(run_experiment(noseed), ConfigError);
  RunOverrides ov;
  ov.seed = 4;
  EXPECT_NO_THROW(run_experiment(noseed, ov));
  const Json cyclic = parse_config(R"({"schema": 1, "space": {"kind": "CircleGrid", "n": 16},
      "systems": {"A": {"type": "iterate", "of": "B", "k": 2}, "B": {"type": "iterate", "of": "A", "k": 2}},
      "checks": [{"checker": "expansivity", "params": {"system": "A"}}]})",
                                   "inline");
  EXPECT_THROW(run_experiment(cyclic), ConfigError);
}

TEST(Config, HashTracksOverrides) {
  const Json cfg = load_config(fixture_dir() + "/tent-MC.json");
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  RunOverrides ov;
  ov.seed = 99;
  const auto c = run_experiment(cfg, ov);
  EXPECT_NE(a.report["config_hash"], c.report["config_hash"]);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}
