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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "locnav/costmap.hpp"
#include "locnav/pose.hpp"

namespace locnav {

/// Cell-center waypoints from start to goal; the last one carries the goal
/// heading, the others face the next waypoint.
struct Path {
  std::vector<Pose2D> waypoints;
  std::vector<CellIndex> cells;
  double cost = 0.0;

  bool empty() const { return waypoints.empty(); }
};

enum class PlanStatus { kOk, kNoPath, kStartBlocked, kGoalBlocked };
std::string to_string(PlanStatus s);

struct PlanResult {
  PlanStatus status = PlanStatus::kNoPath;
  Path path;
  bool ok() const { return status == PlanStatus::kOk; }
};

/// Planning treats INSCRIBED, LETHAL and UNKNOWN as walls.
inline bool traversable(std::uint8_t c) { return c < cost::kInscribed; }

/// Cost of moving `length` meters into a cell of cost `c`.
inline double edge_cost(double length, std::uint8_t c) { return length * (1.0 + c / 256.0); }

/// 8-connected A* with a Euclidean heuristic. A diagonal step needs both
/// cells it cuts past to be traversable.
PlanResult plan_cells(const Costmap& cm, CellIndex start, CellIndex goal);
PlanResult plan(const Costmap& cm, const Pose2D& start, const Pose2D& goal);

/// Fills path.waypoints from path.cells.
void attach_waypoints(const GridGeometry& geo, Path& path, double goal_heading);

/// Closest traversable cell to `from` within `max_cells` rings (Chebyshev).
std::optional<CellIndex> nearest_traversable(const Costmap& cm, CellIndex from, int max_cells);

/// First waypoint index at or after `from` whose cell now costs INSCRIBED or more.
std::optional<std::size_t> first_blocked(const Costmap& cm, const Path& path, std::size_t from = 0);

/// One "x,y,theta" row per waypoint, with a header line.
void write_path_csv(const Path& path, const std::filesystem::path& file);

struct GoalTolerance {
  double xy = 0.2;
  double yaw = 0.1;
  void validate() const;
};

struct VelocityLimits {
  double v = 0.5;
  double omega = 1.0;
};

struct ControllerConfig {
  double lookahead = 0.4;
  VelocityLimits limits;
  /// Heading error above which the robot turns in place before driving.
  double rotate_threshold = 0.8;
  /// Distance from the path beyond which the controller reports LostPath.
  double lost_path_distance = 0.6;
  double heading_gain = 2.0;
  /// Linear speed is capped at this gain times the remaining distance.
  double approach_gain = 1.0;
  /// Smallest turn rate used while aligning with the goal heading.
  double min_rotate_omega = 0.15;
  void validate() const;
};

enum class ControlStatus { kFollowing, kRotating, kReached, kLostPath };
std::string to_string(ControlStatus s);

struct ControlOutput {
  double v = 0.0;
  double omega = 0.0;
  ControlStatus status = ControlStatus::kFollowing;
};

/// Pure-pursuit step toward the lookahead waypoint. Within tol.xy of the last
/// waypoint the robot only turns toward the goal heading; within both
/// tolerances it stops and reports Reached. Throws Error on an empty path.
ControlOutput control_step(const Pose2D& current, const Path& path, const GoalTolerance& tol,
                           const ControllerConfig& cfg);

}  // namespace locnav
