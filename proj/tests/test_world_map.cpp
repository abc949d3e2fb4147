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
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "locnav/distance_field.hpp"
#include "locnav/error.hpp"
#include "locnav/map_io.hpp"
#include "locnav/occupancy_grid.hpp"
#include "locnav/raycast.hpp"
#include "oracles.hpp"

using namespace locnav;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::uint8_t> pgm(const std::string& header, std::vector<std::uint8_t> raster) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

const char* kYaml =
    "image: m.pgm\nresolution: 0.05\norigin: [0.0, 0.0, 0.0]\noccupied_thresh: 0.65\nfree_thresh: 0.196\n"
    "negate: 0\n";

}  // namespace

TEST_CASE("pose heading stays wrapped") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const Pose2D a{u(gen), u(gen), u(gen)};
    const Pose2D b{u(gen), u(gen), u(gen)};
    for (const Pose2D& p : {a, a.compose(b), a.inverse(), a.between(b)}) {
      CHECK(p.theta() > -kPi);
      CHECK(p.theta() <= kPi);
    }
  }
  CHECK(Pose2D(0, 0, -kPi).theta() == doctest::Approx(kPi));
  CHECK(Pose2D(0, 0, 3 * kPi).theta() == doctest::Approx(kPi));
}

TEST_CASE("pose composition with identity is a no-op") {
  const Pose2D p{1.5, -2.0, 0.7};
  CHECK(p.compose(Pose2D{}) == p);
  CHECK(Pose2D{}.compose(p) == p);
  const Pose2D q = p.compose(p.inverse());
  CHECK(std::abs(q.x()) < 1e-12);
  CHECK(std::abs(q.y()) < 1e-12);
  CHECK(std::abs(q.theta()) < 1e-12);
}

TEST_CASE("load_map thresholds pixels") {
  // Pixels are listed top row first; grid row 0 is the bottom image row.
  const auto bytes = pgm("P5\n2 2\n255\n", {0, 254, 205, 0});
  const OccupancyGrid g = load_map(kYaml, bytes);
  CHECK(g.at(0, 1) == Cell::kOccupied);
  CHECK(g.at(1, 1) == Cell::kFree);
  CHECK(g.at(0, 0) == Cell::kUnknown);
  CHECK(g.at(1, 0) == Cell::kOccupied);
  CHECK(g.resolution() == 0.05);

  SUBCASE("negate flips the probability") {
    std::string y = kYaml;
    y.replace(y.find("negate: 0"), 9, "negate: 1");
    const OccupancyGrid n = load_map(y, bytes);
    CHECK(n.at(0, 1) == Cell::kFree);
    CHECK(n.at(1, 1) == Cell::kOccupied);
  }
}

TEST_CASE("cell centers") {
  const OccupancyGrid g(4, 4, 0.05, Pose2D{}, std::vector<Cell>(16, Cell::kFree));
  double x = 0, y = 0;
  g.grid_to_world(0, 0, x, y);
  CHECK(x == doctest::Approx(0.025));
  CHECK(y == doctest::Approx(0.025));
}

TEST_CASE("malformed maps are rejected") {
  CHECK_THROWS_WITH_AS(load_map(kYaml, pgm("P5\n4 4\n255\n", std::vector<std::uint8_t>(15, 254))),
                       doctest::Contains("pixel count mismatch"), MapError);
  CHECK_THROWS_WITH_AS(load_map(kYaml, pgm("P2\n1 1\n255\n", {0})), doctest::Contains("P5"), MapError);
  CHECK_THROWS_AS(load_map(kYaml, pgm("P5\n1 1\n65535\n", {0, 0})), MapError);
  CHECK_THROWS_WITH_AS(load_map("image: m.pgm\nresolution: 0.05\n", pgm("P5\n1 1\n255\n", {0})),
                       doctest::Contains("missing YAML key"), MapError);
  std::string bad = kYaml;
  bad.replace(bad.find("0.05"), 4, "0.00");
  CHECK_THROWS_WITH_AS(load_map(bad, pgm("P5\n1 1\n255\n", {0})), doctest::Contains("resolution"), MapError);
  CHECK_THROWS_AS(OccupancyGrid(2, 2, 0.1, Pose2D{}, std::vector<Cell>(3)), MapError);
}

TEST_CASE("world-grid round trip stays in the cell") {
  std::mt19937_64 gen(2);
  for (const Pose2D origin : {Pose2D{}, Pose2D{-3.0, 2.0, 0.0}, Pose2D{1.0, -1.0, 0.6}}) {
    const GridGeometry geo(60, 40, 0.05, origin);
    std::uniform_real_distribution<double> ux(0.0, 60 * 0.05);
    std::uniform_real_distribution<double> uy(0.0, 40 * 0.05);
    for (int i = 0; i < 2000; ++i) {
      double wx = 0, wy = 0;
      geo.map_to_world(ux(gen), uy(gen), wx, wy);
      const auto c = geo.world_to_grid(wx, wy);
      REQUIRE(c.has_value());
      double cx = 0, cy = 0;
      geo.grid_to_world(c->col, c->row, cx, cy);
      double mx = 0, my = 0, mcx = 0, mcy = 0;
      geo.world_to_map(wx, wy, mx, my);
      geo.world_to_map(cx, cy, mcx, mcy);
      CHECK(std::abs(mx - mcx) <= 0.025 + 1e-12);
      CHECK(std::abs(my - mcy) <= 0.025 + 1e-12);
      CHECK(geo.world_to_grid(cx, cy) == c);
    }
  }
}

TEST_CASE("raycast matches hand-walked rays") {
  for (const auto& c : oracle::crafted_rays()) {
    CAPTURE(c.name);
    CHECK(raycast(c.grid, c.from, c.bearing, c.max_range, c.options) == doctest::Approx(c.expected).epsilon(1e-12));
  }
}

TEST_CASE("raycast on an empty map returns max range") {
  const OccupancyGrid g(100, 100, 0.05, Pose2D{}, std::vector<Cell>(10000, Cell::kFree));
  CHECK(raycast(g, {2.5, 2.5, 0.0}, 1.0, 30.0) == 30.0);
}

TEST_CASE("raycast outside the map throws") {
  const OccupancyGrid g(10, 10, 0.1, Pose2D{}, std::vector<Cell>(100, Cell::kFree));
  CHECK_THROWS_AS(raycast(g, {-0.5, 0.5, 0.0}, 0.0, 5.0), MapError);
}

TEST_CASE("raycast is bounded and monotone in max range") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> pos(0.0, 3.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int m = 0; m < 10; ++m) {
    const OccupancyGrid g = oracle::random_grid(60, 60, 0.05, 0.02, 300 + m);
    for (int i = 0; i < 200; ++i) {
      const Pose2D from{pos(gen), pos(gen), ang(gen)};
      const double b = ang(gen);
      double prev = 0.0;
      for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double d = raycast(g, from, b, r);
        CHECK(d <= r);
        CHECK(d >= prev);
        prev = d;
      }
    }
  }
}

TEST_CASE("distance field examples") {
  std::vector<Cell> cells(25, Cell::kFree);
  cells[2 * 5 + 2] = Cell::kOccupied;
  const OccupancyGrid g(5, 5, 1.0, Pose2D{}, cells);
  const DistanceField f = build_distance_field(g, 10.0);
  CHECK(f.at(2, 2) == 0.0);
  CHECK(f.at(1, 2) == doctest::Approx(1.0));
  CHECK(f.at(3, 2) == doctest::Approx(1.0));
  CHECK(f.at(2, 3) == doctest::Approx(1.0));
  CHECK(f.at(3, 3) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.at(1, 1) == doctest::Approx(std::sqrt(2.0)));

  const OccupancyGrid empty(8, 8, 0.05, Pose2D{}, std::vector<Cell>(64, Cell::kFree));
  const DistanceField e = build_distance_field(empty, 2.0);
  for (double v : e.values()) CHECK(v == 2.0);
  CHECK_THROWS_AS(build_distance_field(empty, 0.0), MapError);
}

TEST_CASE("distance transform without seeds is infinite") {
  const std::vector<std::uint8_t> none(12, 0);
  for (double v : squared_distance_transform(4, 3, none)) CHECK(std::isinf(v));
}

TEST_CASE("distance field equals brute force on random 50x50 maps") {
  const auto r = oracle::distance_field_equivalence(50, 50);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("distance field equals brute force on 100x100 maps") {
  const auto r = oracle::distance_field_equivalence(3, 100);
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("distance field invariants") {
  for (int m = 0; m < 10; ++m) {
    const OccupancyGrid g = oracle::random_grid(40, 30, 0.05, 0.01 * (m + 1), 500 + m);
    const DistanceField f = build_distance_field(g, 2.0);
    const double lip = g.resolution() * std::sqrt(2.0) + 1e-12;
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        const double d = f.at(c, r);
        if (g.at(c, r) == Cell::kOccupied) CHECK(d == 0.0);
        CHECK(d >= 0.0);
        CHECK(d <= 2.0);
        if (c + 1 < g.width()) CHECK(std::abs(d - f.at(c + 1, r)) <= lip);
        if (r + 1 < g.height()) CHECK(std::abs(d - f.at(c, r + 1)) <= lip);
        if (c + 1 < g.width() && r + 1 < g.height()) CHECK(std::abs(d - f.at(c + 1, r + 1)) <= lip);
      }
    }
  }
}

TEST_CASE("map files round trip") {
  const OccupancyGrid g = oracle::random_grid(17, 9, 0.1, 0.3, 77).with_box(0.2, 0.2, 0.45, 0.45, Cell::kUnknown);
  const fs::path dir = fs::temp_directory_path() / "locnav_test_maps";
  fs::create_directories(dir);
  write_map_files(g, dir / "rt.yaml");
  const OccupancyGrid back = load_map_file(dir / "rt.yaml");
  CHECK(back.geometry() == g.geometry());
  CHECK(std::equal(back.cells().begin(), back.cells().end(), g.cells().begin(), g.cells().end()));

  const PgmImage img{3, 2, {1, 2, 3, 4, 5, 6}};
  const PgmImage again = parse_pgm(encode_pgm(img));
  CHECK(again.width == 3);
  CHECK(again.height == 2);
  CHECK(again.pixels == img.pixels);
}
