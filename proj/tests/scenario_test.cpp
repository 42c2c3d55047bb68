#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pedrisk/error.hpp"
#include "pedrisk/rng.hpp"
#include "pedrisk/scenario.hpp"
#include "test_support.hpp"

using namespace pedrisk;

TEST_CASE("to_ego_frame identity pose") {
  EgoPose pose{0, 0, 0, 0};
  auto p = to_ego_frame(pose, {3.0, 4.0});
  CHECK(p.x == doctest::Approx(3.0));
  CHECK(p.y == doctest::Approx(4.0));
}

TEST_CASE("to_ego_frame rotation by pi/2") {
  EgoPose pose{0, 0, 3.14159265358979323846 / 2.0, 0};
  auto p = to_ego_frame(pose, {0.0, 5.0});
  CHECK(p.x == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("to_ego_frame coincident point maps to the origin") {
  EgoPose pose{1, 1, 0, 0};
  auto p = to_ego_frame(pose, {1.0, 1.0});
  CHECK(p.x == 0.0);
  CHECK(p.y == 0.0);
}

TEST_CASE("ego frame round trip recovers world points") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    EgoPose pose{rng.uniform(-40, 40), rng.uniform(-40, 40),
                 rng.uniform(-3.14, 3.14), 0};
    WorldPoint w{rng.uniform(-60, 60), rng.uniform(-60, 60)};
    WorldPoint back = to_world_frame(pose, to_ego_frame(pose, w));
    CHECK(back.x == doctest::Approx(w.x).epsilon(1e-9));
    CHECK(back.y == doctest::Approx(w.y).epsilon(1e-9));
  }
}

TEST_CASE("normalize_heading lands in (-pi, pi]") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    double h = normalize_heading(rng.uniform(-30.0, 30.0));
    CHECK(h > -3.14159265358979323846 - 1e-12);
    CHECK(h <= 3.14159265358979323846 + 1e-12);
  }
  CHECK(normalize_heading(3 * 3.14159265358979323846) ==
        doctest::Approx(3.14159265358979323846));
}

TEST_CASE("simulate_encounter is deterministic for a seed") {
  ScenarioConfig c;
  c.rng_seed = 1234;
  auto a = simulate_encounter(c);
  auto b = simulate_encounter(c);
  REQUIRE(a.noisy.points.size() == b.noisy.points.size());
  for (std::size_t k = 0; k < a.noisy.points.size(); ++k) {
    CHECK(a.noisy.points[k].x == b.noisy.points[k].x);  // bit-identical
    CHECK(a.noisy.points[k].y == b.noisy.points[k].y);
  }
}

TEST_CASE("simulate_encounter frame count and alignment") {
  ScenarioConfig c;
  c.duration = 4.0;
  c.frame_rate = 6.5;
  auto enc = simulate_encounter(c);
  CHECK(enc.noisy.points.size() == 26);
  CHECK(enc.clean.points.size() == enc.noisy.points.size());
  CHECK(enc.ego_world.size() == enc.noisy.points.size());
  CHECK(enc.ped_world.size() == enc.noisy.points.size());
}

TEST_CASE("drift-away encounters separate over the final half") {
  auto configs = demo_scenario_set(6.5, 0.0);
  ScenarioConfig drift = configs[3];
  REQUIRE(drift.behavior == PedestrianBehavior::DriftAway);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    drift.rng_seed = seed;
    auto enc = simulate_encounter(drift);
    const std::size_t n = enc.clean.points.size();
    for (std::size_t k = n / 2; k + 1 < n; ++k) {
      double d0 = std::hypot(enc.clean.points[k].x, enc.clean.points[k].y);
      double d1 = std::hypot(enc.clean.points[k + 1].x, enc.clean.points[k + 1].y);
      CHECK(d1 >= d0 - 1e-9);
    }
  }
}

TEST_CASE("crossing with constant speeds sweeps y monotonically") {
  ScenarioConfig c;
  c.scenario = ScenarioKind::GoingStraight;
  c.behavior = PedestrianBehavior::Cross;
  c.initial_speed = 4.0;
  c.ped_speed = 1.3;
  c.start_ahead = {10.0, 10.0};
  c.start_lateral = {2.5, 2.5};
  c.noise_sigma = 0.0;
  c.duration = 3.0;
  c.rng_seed = 9;
  auto enc = simulate_encounter(c);
  for (std::size_t k = 0; k + 1 < enc.clean.points.size(); ++k) {
    CHECK(enc.clean.points[k + 1].y < enc.clean.points[k].y);
  }
}

TEST_CASE("simulate_encounter rejects invalid configs") {
  ScenarioConfig c;
  c.frame_rate = 0.0;
  CHECK_THROWS_AS(simulate_encounter(c), DataError);
  c = {};
  c.duration = 0.1;  // under 2 frames at 6.5 fps
  CHECK_THROWS_AS(simulate_encounter(c), DataError);
  c = {};
  c.noise_sigma = -1.0;
  CHECK_THROWS_AS(simulate_encounter(c), DataError);
  c = {};
  c.start_ahead = {5.0, 4.0};
  CHECK_THROWS_AS(simulate_encounter(c), DataError);
}

TEST_CASE("generate_dataset row count follows duration * frame_rate") {
  // 60 encounters of ~4 s at 6.5 fps: 26 frames each, 1560 data points.
  ScenarioConfig base;
  base.duration = 4.0;
  base.frame_rate = 6.5;
  auto out = generate_dataset({base}, 60, 77);
  CHECK(out.tracks.size() == 60);
  CHECK(out.features.total_rows() == 60 * 26);
}

TEST_CASE("generate_dataset leaves noiseless linear tracks unchanged") {
  ScenarioConfig c;
  c.scenario = ScenarioKind::GoingStraight;
  c.behavior = PedestrianBehavior::Cross;
  c.initial_speed = 3.0;  // constant: relative motion is affine in time
  c.ped_speed = 1.2;
  c.noise_sigma = 0.0;
  c.duration = 4.0;
  auto out = generate_dataset({c}, 3, 5);
  for (std::size_t e = 0; e < out.tracks.size(); ++e) {
    const auto& raw = out.tracks[e];
    const auto& feat = out.features.tracks[e];
    for (std::size_t k = 0; k < raw.points.size(); ++k) {
      CHECK(std::abs(feat.states[k].px - raw.points[k].x) < 1e-6);
      CHECK(std::abs(feat.states[k].py - raw.points[k].y) < 1e-6);
    }
  }
}

TEST_CASE("generate_dataset quartiles match a sort-based oracle") {
  auto configs = demo_scenario_set(6.5, 0.05);
  auto out = generate_dataset(configs, 4, 2024);

  std::vector<double> ttc;
  for (const auto& ft : out.features.tracks) {
    for (const auto& s : ft.states) ttc.push_back(s.ttc);
  }
  CHECK(out.quartiles.q25[4] ==
        doctest::Approx(testsupport::percentile_oracle(ttc, 0.25)).epsilon(1e-12));
  CHECK(out.quartiles.median[4] ==
        doctest::Approx(testsupport::percentile_oracle(ttc, 0.50)).epsilon(1e-12));
  CHECK(out.quartiles.q75[4] ==
        doctest::Approx(testsupport::percentile_oracle(ttc, 0.75)).epsilon(1e-12));
  CHECK(out.quartiles.min[4] == *std::min_element(ttc.begin(), ttc.end()));
  CHECK(out.quartiles.max[4] == *std::max_element(ttc.begin(), ttc.end()));
}

TEST_CASE("behavior archetypes order their TTC medians") {
  auto configs = demo_scenario_set(6.5, 0.05);
  auto median_ttc_of = [&](const ScenarioConfig& c) {
    auto out = generate_dataset({c}, 100, 31);
    std::vector<double> ttc;
    for (const auto& ft : out.features.tracks) {
      for (const auto& s : ft.states) ttc.push_back(s.ttc);
    }
    return testsupport::percentile_oracle(ttc, 0.5);
  };
  double cross = median_ttc_of(configs[0]);
  double approach = median_ttc_of(configs[1]);
  double hesitate = median_ttc_of(configs[2]);
  double drift = median_ttc_of(configs[3]);
  CHECK(cross < hesitate);
  CHECK(approach < hesitate);
  CHECK(hesitate < drift);
}
