// Copyright 2026 The locnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "locnav/distance_field.hpp"
#include "locnav/error.hpp"
#include "locnav/sensor_model.hpp"
#include "locnav/sim.hpp"
#include "locnav/worlds.hpp"

using namespace locnav;

namespace {

constexpr double kPi = std::numbers::pi;

LaserScan one_beam(double range, double range_max = 30.0) {
  LaserScan z;
  z.bearings = {0.0};
  z.ranges = {range};
  z.range_max = range_max;
  return z;
}

// 20x20 cells of 0.1 m with a single obstacle at cell (15, 5).
OccupancyGrid single_obstacle() {
  std::vector<Cell> c(400, Cell::kFree);
  c[5 * 20 + 15] = Cell::kOccupied;
  return OccupancyGrid(20, 20, 0.1, Pose2D{}, c);
}

}  // namespace

TEST_CASE("likelihood field per-beam examples") {
  const SensorModelConfig cfg;
  CHECK(likelihood_field_beam_prob(0.0, 30.0, cfg) == doctest::Approx(0.95 + 0.5 / 30.0).epsilon(1e-12));
  CHECK(likelihood_field_beam_prob(2.0, 30.0, cfg) == doctest::Approx(0.5 / 30.0 + 0.95 * std::exp(-50.0)));
  CHECK(likelihood_field_beam_prob(2.0, 30.0, cfg) == doctest::Approx(0.01667).epsilon(1e-3));
}

TEST_CASE("likelihood field weight on a map") {
  const OccupancyGrid g = single_obstacle();
  const DistanceField f = build_distance_field(g, 2.0);
  const SensorModelConfig cfg;
  // From the center of cell (5, 5) the obstacle's center is 1.0 m ahead.
  const Pose2D sensor{0.55, 0.55, 0.0};
  CHECK(likelihood_field_weight(one_beam(1.0), sensor, f, cfg) == doctest::Approx(0.95 + 0.5 / 30.0));

  SUBCASE("empty beam set") {
    CHECK(likelihood_field_weight(one_beam(30.0), sensor, f, cfg) == 1.0);
    LaserScan none;
    CHECK(likelihood_field_weight(none, sensor, f, cfg) == 1.0);
  }
  SUBCASE("endpoint outside the map uses the saturation distance") {
    const double w = likelihood_field_weight(one_beam(5.0), sensor, f, cfg);
    CHECK(w == doctest::Approx(likelihood_field_beam_prob(2.0, 30.0, cfg)));
  }
}

TEST_CASE("likelihood field weight does not increase with distance to the obstacle") {
  const SensorModelConfig cfg;
  double prev = likelihood_field_beam_prob(0.0, 30.0, cfg);
  for (double d = 0.01; d <= 2.0; d += 0.01) {
    const double p = likelihood_field_beam_prob(d, 30.0, cfg);
    CHECK(p <= prev);
    prev = p;
  }
  // Same along a ray on a map: endpoints walk away from the obstacle.
  const OccupancyGrid g = single_obstacle();
  const DistanceField f = build_distance_field(g, 2.0);
  double last = 2.0;
  for (double r = 1.0; r <= 1.4; r += 0.1) {
    const double w = likelihood_field_weight(one_beam(r), {0.55, 0.55, 0.0}, f, cfg);
    CHECK(w <= last);
    last = w;
  }
}

TEST_CASE("weights are positive and finite") {
  const OccupancyGrid g = fixture_maze(false);
  const DistanceField f = build_distance_field(g, 2.0);
  SensorModelConfig lf;
  SensorModelConfig beam;
  beam.model_type = LaserModelType::kBeam;
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> pos(-9.5, 9.5);
  std::uniform_real_distribution<double> rng(0.0, 35.0);
  for (int i = 0; i < 50; ++i) {
    LaserScan z;
    z.range_max = 30.0;
    for (int b = 0; b < 60; ++b) {
      z.bearings.push_back(-2.0 + 4.0 * b / 60.0);
      z.ranges.push_back(std::min(30.0, rng(gen)));
    }
    const Pose2D p{pos(gen), pos(gen), 0.3 * i};
    const double lw = likelihood_field_log_weight(z, p, f, lf).log_weight;
    const double bw = beam_model_log_weight(z, p, g, beam).log_weight;
    CHECK(std::isfinite(lw));
    CHECK(std::isfinite(bw));
    CHECK(likelihood_field_weight(z, p, f, lf) >= 0.0);
  }
}

TEST_CASE("beam subsampling") {
  const auto all = select_beams(20, 30);
  REQUIRE(all.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(all[i] == i);
  const auto some = select_beams(540, 30);
  CHECK(some.size() == 30);
  CHECK(std::set<std::size_t>(some.begin(), some.end()).size() == 30);
  for (std::size_t k = 1; k < some.size(); ++k) CHECK(some[k] - some[k - 1] == 18);
}

TEST_CASE("beam density has its mode at the expected range") {
  const SensorModelConfig cfg;
  for (double zs : {1.0, 3.0, 8.0}) {
    const double at = beam_density(zs, zs, 30.0, cfg);
    CHECK(at >= beam_density(zs + 0.5, zs, 30.0, cfg));
    CHECK(at >= beam_density(zs - 0.5, zs, 30.0, cfg));
  }
  // Max-range reading on a free ray.
  const double total = 0.95 + 0.1 + 0.05 + 0.5;
  CHECK(beam_density(30.0, 30.0, 30.0, cfg) >= 0.05 / total);
  CHECK(beam_density(29.0, 30.0, 30.0, cfg) < beam_density(30.0, 30.0, 30.0, cfg));
}

TEST_CASE("beam model matches a hand evaluation") {
  // 10x10 cells of 1 m; column 9 and row 9 are walls. From (2.5, 2.5) the
  // walls are 6.5 m away east and north; westward the ray leaves the map.
  std::vector<Cell> c(100, Cell::kFree);
  for (int i = 0; i < 10; ++i) {
    c[i * 10 + 9] = Cell::kOccupied;
    c[9 * 10 + i] = Cell::kOccupied;
  }
  const OccupancyGrid g(10, 10, 1.0, Pose2D{}, c);
  SensorModelConfig cfg;
  cfg.model_type = LaserModelType::kBeam;
  LaserScan z;
  z.range_max = 10.0;
  z.bearings = {0.0, kPi / 2.0, kPi};
  z.ranges = {6.3, 7.0, 10.0};

  const double total = 1.6;
  const double norm = 1.0 / (0.2 * std::sqrt(2.0 * kPi));
  const double short_norm = 1.0 - std::exp(-0.1 * 6.5);
  // z = 6.3 < z* = 6.5: hit, short and random terms.
  const double b1 = (0.95 * norm * std::exp(-0.04 / 0.08) + 0.1 * 0.1 * std::exp(-0.63) / short_norm + 0.5 / 10.0) /
                    total;
  // z = 7.0 > z*: hit and random terms.
  const double b2 = (0.95 * norm * std::exp(-0.25 / 0.08) + 0.5 / 10.0) / total;
  // z = z* = range max: hit peak, short term, and the max-range mass of width 1.
  const double b3 = (0.95 * norm + 0.1 * 0.1 * std::exp(-1.0) / (1.0 - std::exp(-1.0)) + 0.05 / 1.0) / total;

  const double w = beam_model_weight(z, {2.5, 2.5, 0.0}, g, cfg);
  CHECK(w == doctest::Approx(b1 * b2 * b3).epsilon(1e-9));
}

TEST_CASE("inlier fraction") {
  const OccupancyGrid g = single_obstacle();
  const DistanceField f = build_distance_field(g, 2.0);
  LaserScan z;
  z.range_max = 30.0;
  z.bearings = {0.0, 0.0, 0.0, 0.0};
  z.ranges = {1.0, 1.05, 1.5, 30.0};
  // Endpoints land 0 m and 0.1 m from the obstacle, then off the map; the
  // max-range beam is not counted.
  CHECK(scan_inlier_fraction(z, {0.55, 0.55, 0.0}, f, 0.2) == doctest::Approx(2.0 / 3.0));
  CHECK(scan_inlier_fraction(one_beam(30.0), {0.55, 0.55, 0.0}, f, 0.2) == 1.0);
}

TEST_CASE("true pose outscores a 0.5 m displacement") {
  const OccupancyGrid world = fixture_maze(false);
  const DistanceField f = build_distance_field(world, 2.0);
  const RobotConfig robot = RobotConfig::udacity_bot();
  const SensorModelConfig cfg;
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> pos(-9.5, 9.5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  int held = 0;
  int tried = 0;
  while (tried < 100) {
    const Pose2D p{pos(gen), pos(gen), ang(gen)};
    if (footprint_collides(world, p.x(), p.y(), robot.footprint_radius)) continue;
    ++tried;
    SimState st = make_sim_state(p, 1, {});
    StreamRng rng(1, StreamDomain::kTest, tried, 0);
    const LaserScan z = simulate_scan(st, world, robot, 0.0, rng);
    const double a = ang(gen);
    const Pose2D moved{p.x() + 0.5 * std::cos(a), p.y() + 0.5 * std::sin(a), p.theta()};
    const double at_truth = likelihood_field_log_weight(z, p.compose(robot.laser_mount), f, cfg).log_weight;
    const double displaced = likelihood_field_log_weight(z, moved.compose(robot.laser_mount), f, cfg).log_weight;
    if (at_truth >= displaced) ++held;
  }
  CHECK(held >= 95);
}

TEST_CASE("sensor config validation") {
  SensorModelConfig ok;
  CHECK_NOTHROW(ok.validate());
  SensorModelConfig bad = ok;
  bad.sigma_hit = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ok;
  bad.z_rand = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ok;
  bad.max_beams = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(parse_laser_model_type("likelihood_field") == LaserModelType::kLikelihoodField);
  CHECK(parse_laser_model_type("beam") == LaserModelType::kBeam);
  CHECK_THROWS_AS(parse_laser_model_type("sonar"), ConfigError);
}
