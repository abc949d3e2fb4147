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
#include <cstdlib>
#include <numbers>
#include <random>

#include "locnav/error.hpp"
#include "locnav/nav.hpp"
#include "oracles.hpp"

using namespace locnav;

namespace {

constexpr double kPi = std::numbers::pi;

Costmap strip(int n) { return Costmap(GridGeometry(n, 1, 0.05, Pose2D{}), cost::kFree); }

Path straight_path(double length, double heading = 0.0) {
  Path p;
  for (double x = 0.0; x <= length + 1e-9; x += 0.05) p.waypoints.emplace_back(x, 0.0, 0.0);
  p.waypoints.back() = Pose2D(p.waypoints.back().x(), 0.0, heading);
  return p;
}

}  // namespace

TEST_CASE("corridor plan") {
  const PlanResult r = plan_cells(strip(10), {0, 0}, {9, 0});
  REQUIRE(r.ok());
  CHECK(r.path.cells.size() == 10);
  CHECK(r.path.cost == doctest::Approx(9 * 0.05));
  for (int i = 0; i < 10; ++i) CHECK(r.path.cells[i] == CellIndex{i, 0});
}

TEST_CASE("blocked plans") {
  Costmap cm(GridGeometry(20, 20, 0.05, Pose2D{}), cost::kFree);
  for (int c = 8; c <= 12; ++c) {
    cm.set(c, 8, cost::kLethal);
    cm.set(c, 12, cost::kLethal);
  }
  for (int r = 8; r <= 12; ++r) {
    cm.set(8, r, cost::kLethal);
    cm.set(12, r, cost::kLethal);
  }
  CHECK(plan_cells(cm, {0, 0}, {10, 10}).status == PlanStatus::kNoPath);
  CHECK(plan_cells(cm, {8, 8}, {0, 0}).status == PlanStatus::kStartBlocked);
  CHECK(plan_cells(cm, {0, 0}, {12, 9}).status == PlanStatus::kGoalBlocked);
  cm.set(3, 3, cost::kInscribed);
  CHECK(plan_cells(cm, {0, 0}, {3, 3}).status == PlanStatus::kGoalBlocked);
  cm.set(4, 4, cost::kUnknown);
  CHECK(plan_cells(cm, {0, 0}, {4, 4}).status == PlanStatus::kGoalBlocked);
  CHECK_FALSE(plan(cm, {-1.0, 0.1, 0.0}, {0.1, 0.1, 0.0}).ok());
}

TEST_CASE("no corner cutting") {
  Costmap cm(GridGeometry(3, 3, 1.0, Pose2D{}), cost::kFree);
  cm.set(1, 0, cost::kLethal);
  cm.set(0, 1, cost::kLethal);
  CHECK(plan_cells(cm, {0, 0}, {1, 1}).status == PlanStatus::kNoPath);
}

TEST_CASE("planner cost equals Dijkstra") {
  const auto r = oracle::planner_equivalence();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("plans avoid walls and are connected") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Costmap cm = oracle::random_costmap(30, 30, s + 1000);
    std::mt19937_64 gen(s);
    std::uniform_int_distribution<int> u(0, 29);
    const PlanResult r = plan_cells(cm, {u(gen), u(gen)}, {u(gen), u(gen)});
    if (!r.ok()) continue;
    for (std::size_t i = 0; i < r.path.cells.size(); ++i) {
      CHECK(cm.at(r.path.cells[i]) < cost::kInscribed);
      if (i == 0) continue;
      const CellIndex a = r.path.cells[i - 1];
      const CellIndex b = r.path.cells[i];
      CHECK(std::max(std::abs(a.col - b.col), std::abs(a.row - b.row)) == 1);
    }
  }
}

TEST_CASE("waypoint headings") {
  Costmap cm(GridGeometry(10, 10, 0.1, Pose2D{}), cost::kFree);
  const PlanResult r = plan(cm, {0.05, 0.05, 0.0}, {0.55, 0.05, 1.0});
  REQUIRE(r.ok());
  CHECK(r.path.waypoints.front().theta() == doctest::Approx(0.0));
  CHECK(r.path.waypoints.back().theta() == doctest::Approx(1.0));
}

TEST_CASE("first blocked waypoint") {
  Costmap cm = strip(10);
  const PlanResult r = plan_cells(cm, {0, 0}, {9, 0});
  CHECK_FALSE(first_blocked(cm, r.path).has_value());
  cm.set(6, 0, cost::kInscribed);
  CHECK(first_blocked(cm, r.path) == 6u);
  CHECK_FALSE(first_blocked(cm, r.path, 7).has_value());
}

TEST_CASE("nearest traversable cell") {
  Costmap cm(GridGeometry(9, 9, 0.1, Pose2D{}), cost::kLethal);
  cm.set(6, 4, cost::kFree);
  CHECK(nearest_traversable(cm, {4, 4}, 2) == CellIndex{6, 4});
  CHECK_FALSE(nearest_traversable(cm, {4, 4}, 1).has_value());
}

TEST_CASE("controller examples") {
  const GoalTolerance tol;
  const ControllerConfig cfg;
  const Path p = straight_path(2.0);

  const ControlOutput ahead = control_step({0, 0, 0}, p, tol, cfg);
  CHECK(ahead.status == ControlStatus::kFollowing);
  CHECK(ahead.v == doctest::Approx(cfg.limits.v));
  CHECK(ahead.omega == doctest::Approx(0.0));

  const ControlOutput behind = control_step({0, 0, kPi}, p, tol, cfg);
  CHECK(behind.v == 0.0);
  CHECK(std::abs(behind.omega) == doctest::Approx(cfg.limits.omega));

  const ControlOutput turn = control_step({1.95, 0.0, 1.0}, p, tol, cfg);
  CHECK(turn.status == ControlStatus::kRotating);
  CHECK(turn.v == 0.0);
  CHECK(turn.omega < 0.0);

  CHECK(control_step({1.0, 1.0, 0.0}, p, tol, cfg).status == ControlStatus::kLostPath);
  CHECK_THROWS_AS(control_step({0, 0, 0}, Path{}, tol, cfg), Error);
}

TEST_CASE("controller respects its limits") {
  const GoalTolerance tol;
  ControllerConfig cfg;
  const Path p = straight_path(3.0, 0.5);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> x(-0.2, 3.2);
  std::uniform_real_distribution<double> y(-0.5, 0.5);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int i = 0; i < 5000; ++i) {
    const ControlOutput out = control_step({x(gen), y(gen), a(gen)}, p, tol, cfg);
    CHECK(std::abs(out.v) <= cfg.limits.v + 1e-12);
    CHECK(std::abs(out.omega) <= cfg.limits.omega + 1e-12);
    CHECK(out.v >= 0.0);
  }
}

TEST_CASE("reached is a fixed point") {
  const GoalTolerance tol;
  const ControllerConfig cfg;
  const Path p = straight_path(2.0, 0.3);
  const Pose2D at{1.9, 0.05, 0.35};
  for (int i = 0; i < 3; ++i) {
    const ControlOutput out = control_step(at, p, tol, cfg);
    CHECK(out.status == ControlStatus::kReached);
    CHECK(out.v == 0.0);
    CHECK(out.omega == 0.0);
  }
}

TEST_CASE("controller config validation") {
  ControllerConfig ok;
  CHECK_NOTHROW(ok.validate());
  ControllerConfig bad = ok;
  bad.lookahead = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  GoalTolerance t;
  t.xy = -1.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
