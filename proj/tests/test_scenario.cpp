#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mrac/errors.hpp"
#include "mrac/scenario.hpp"

using namespace mrac;

TEST_CASE("build_scenario is fully determined by config and seed") {
  ScenarioConfig cfg;
  cfg.comm_restrictions = 25;
  const Scenario a = build_scenario(cfg, 42);
  const Scenario b = build_scenario(cfg, 42);
  CHECK(a.ground_truth == b.ground_truth);
  CHECK(a.restrictions == b.restrictions);
  const Scenario c = build_scenario(cfg, 43);
  CHECK(a.ground_truth != c.ground_truth);
}

TEST_CASE("restriction count edge cases") {
  ScenarioConfig cfg;
  cfg.episode_length = 40;
  cfg.comm_restrictions = 0;
  CHECK(build_scenario(cfg, 1).restrictions.empty());
  cfg.comm_restrictions = 40;
  const Scenario all = build_scenario(cfg, 1);
  CHECK(all.restrictions.size() == 40);
  CHECK(*all.restrictions.begin() == 1);
  CHECK(*all.restrictions.rbegin() == 40);
  cfg.comm_restrictions = 41;
  CHECK_THROWS_AS(build_scenario(cfg, 1), InputError);
}

TEST_CASE("restrictions are timesteps within the episode") {
  ScenarioConfig cfg;
  cfg.comm_restrictions = 30;
  const Scenario s = build_scenario(cfg, 9);
  CHECK(s.restrictions.size() == 30);
  for (int t : s.restrictions) {
    CHECK(t >= 1);
    CHECK(t <= cfg.episode_length);
  }
}

TEST_CASE("invalid configs are rejected") {
  ScenarioConfig cfg;
  cfg.width = 0;
  CHECK_THROWS_AS(build_scenario(cfg, 1), InputError);
  cfg = ScenarioConfig{};
  cfg.target_density = 1.5;
  CHECK_THROWS_AS(build_scenario(cfg, 1), InputError);
  cfg = ScenarioConfig{};
  cfg.start_r = Pose{10, 0};
  CHECK_THROWS_AS(build_scenario(cfg, 1), InputError);
}

TEST_CASE("prior initializations") {
  Rng rng(5);
  const std::vector<std::uint8_t> truth{1, 0};
  SUBCASE("max entropy") {
    const CellBelief b = init_prior(InitKind::MaxEntropy, std::vector<std::uint8_t>(4, 0), rng);
    REQUIRE(b.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(b.prob(i) == 0.5);
  }
  SUBCASE("prior knowledge follows the ground truth") {
    const CellBelief b = init_prior(InitKind::PriorKnowledge, truth, rng);
    CHECK(b.prob(0) == 0.7);
    CHECK(b.prob(1) == 0.3);
  }
  SUBCASE("random stays within [0.05, 0.95]") {
    const CellBelief b = init_prior(InitKind::Random, std::vector<std::uint8_t>(10000, 0), rng);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(b.prob(i) >= 0.05);
      CHECK(b.prob(i) < 0.95);
    }
  }
}

TEST_CASE("sense follows the detector statistics") {
  ScenarioConfig cfg;
  cfg.width = 2;
  cfg.height = 1;
  cfg.start_rp = Pose{0, 1};
  cfg.target_density = 1.0;  // every cell occupied
  Scenario s = build_scenario(cfg, 3);

  SUBCASE("perfect detector on an occupied cell") {
    s.sensor = ObsModel{1.0, 0.0};
    Rng rng(1);
    for (int i = 0; i < 20; ++i) CHECK(sense(s, Pose{0, 0}, 0, 1, rng).value == 1);
  }
  SUBCASE("coin-flip detector ignores the truth") {
    s.sensor = ObsModel{0.5, 0.5};
    Rng rng(2);
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += sense(s, Pose{0, 0}, 0, 1, rng).value;
    CHECK(ones > 4800);
    CHECK(ones < 5200);
  }
  SUBCASE("default detector hit rate on an occupied cell") {
    Rng rng(4);
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += sense(s, Pose{0, 0}, 0, 1, rng).value;
    CHECK(std::abs(ones / 10000.0 - 0.9) < 0.01);
  }
}

TEST_CASE("sense records pose cell, robot and time") {
  ScenarioConfig cfg;
  Scenario s = build_scenario(cfg, 8);
  Rng rng(1);
  const Observation o = sense(s, Pose{2, 3}, 1, 17, rng);
  CHECK(o.cell == s.grid.cell_index(Pose{2, 3}));
  CHECK(o.robot == 1);
  CHECK(o.time == 17);
}

TEST_CASE("move semantics") {
  const Grid g{5, 4};
  SUBCASE("interior unit steps") {
    CHECK(move(Pose{2, 2}, MotionPrimitive::North, g) == Pose{1, 2});
    CHECK(move(Pose{2, 2}, MotionPrimitive::South, g) == Pose{3, 2});
    CHECK(move(Pose{2, 2}, MotionPrimitive::East, g) == Pose{2, 3});
    CHECK(move(Pose{2, 2}, MotionPrimitive::West, g) == Pose{2, 1});
  }
  SUBCASE("edges clamp to a stay") {
    CHECK(move(Pose{0, 2}, MotionPrimitive::North, g) == Pose{0, 2});
    CHECK(move(Pose{3, 2}, MotionPrimitive::South, g) == Pose{3, 2});
    CHECK(move(Pose{2, 4}, MotionPrimitive::East, g) == Pose{2, 4});
    CHECK(move(Pose{2, 0}, MotionPrimitive::West, g) == Pose{2, 0});
  }
  SUBCASE("N,S,E,W from the interior returns to the start") {
    Pose p{2, 2};
    p = move(p, MotionPrimitive::North, g);
    p = move(p, MotionPrimitive::South, g);
    p = move(p, MotionPrimitive::East, g);
    p = move(p, MotionPrimitive::West, g);
    CHECK(p == Pose{2, 2});
  }
  SUBCASE("no pose ever leaves the grid") {
    Rng rng(6);
    Pose p{0, 0};
    for (int i = 0; i < 1000; ++i) {
      p = move(p, static_cast<MotionPrimitive>(rng.next_below(4)), g);
      CHECK(g.contains(p));
    }
  }
}
