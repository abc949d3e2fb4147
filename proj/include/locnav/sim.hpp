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

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locnav/costmap.hpp"
#include "locnav/ekf.hpp"
#include "locnav/motion_model.hpp"
#include "locnav/occupancy_grid.hpp"
#include "locnav/rng.hpp"
#include "locnav/sensor_model.hpp"

namespace locnav {

/// Planar laser: beams spread evenly over the field of view, centered on
/// the sensor's x axis.
struct LaserSpec {
  double fov = 1.5 * std::numbers::pi;
  int beams = 540;
  double range_min = 0.1;
  double range_max = 30.0;

  std::vector<double> bearings() const;
  void validate() const;
};

struct RobotConfig {
  std::string name;
  double chassis_length = 0.4;
  double chassis_width = 0.2;
  double chassis_height = 0.1;
  double wheel_radius = 0.1;
  double wheel_length = 0.05;
  double caster_radius = 0.0499;
  Pose2D laser_mount{0.15, 0.0, 0.0};
  Pose2D camera_mount{0.2, 0.0, 0.0};
  double footprint_radius = 0.0;
  /// Multiplies the controller's velocity limits.
  double speed_scale = 1.0;
  LaserSpec laser;
  CostmapConfig costmap;

  double half_diagonal() const;
  void validate() const;

  static RobotConfig udacity_bot();
  static RobotConfig sagar_bot();
  /// Throws ConfigError for an unknown name.
  static RobotConfig preset(const std::string& name);
};

struct Landmark {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct SimNoise {
  /// Corrupts the odometry feed, same parameterization as the filter.
  MotionNoise odometry;
  double laser_sigma = 0.01;
  double landmark_range_sigma = 0.05;
  double landmark_bearing_sigma = 0.02;
};

enum class EventKind { kSetGoal, kKidnap, kTeleop };
std::string to_string(EventKind k);

struct ScenarioEvent {
  double time = 0.0;
  EventKind kind = EventKind::kSetGoal;
  /// Goal or kidnap destination.
  Pose2D pose;
  double v = 0.0;
  double omega = 0.0;
  double duration = 0.0;
};

struct TeleopCommand {
  double v = 0.0;
  double omega = 0.0;
  double until = 0.0;
};

struct SimState {
  Pose2D true_pose;
  /// Dead-reckoned pose in the odometry frame.
  Pose2D odom_pose;
  double clock = 0.0;
  std::uint64_t tick = 0;
  std::uint64_t seed = 0;
  /// Sorted by time.
  std::vector<ScenarioEvent> pending;
  std::optional<Pose2D> goal;
  std::optional<TeleopCommand> teleop;
  /// Events that fired during the last step.
  std::vector<ScenarioEvent> fired;
  /// Fraction of the last command that could be executed.
  double executed_fraction = 1.0;
};

/// Starts at clock 0 with odometry equal to the start pose. Events at t <= 0
/// fire immediately. Throws ConfigError if event times decrease.
SimState make_sim_state(const Pose2D& start, std::uint64_t seed, std::vector<ScenarioEvent> events);

/// Constant (v, omega) for dt seconds, integrated exactly along the arc.
Pose2D integrate_unicycle(const Pose2D& p, double v, double omega, double dt);

/// True if a disc overlaps an Occupied cell or leaves the grid.
bool footprint_collides(const OccupancyGrid& world, double x, double y, double radius);

/// One tick. Motion that would hit an obstacle is cut short at the last
/// collision-free fraction of the command. The odometry pose follows the
/// executed motion through the sampled motion-noise model.
SimState sim_step(const SimState& state, double v, double omega, double dt, const OccupancyGrid& world,
                  const RobotConfig& robot, const SimNoise& noise);

/// Ground-truth raycasts from the laser mount plus Gaussian noise, clamped to
/// [range_min, range_max]. Beams that hit nothing report range_max.
LaserScan simulate_scan(const SimState& state, const OccupancyGrid& world, const RobotConfig& robot, double sigma,
                        StreamRng& rng);

/// Noisy range and bearing to every landmark within max_range that has a
/// clear line of sight from the robot center.
std::vector<LandmarkObservation> simulate_landmarks(const SimState& state, std::span<const Landmark> landmarks,
                                                    double max_range, const SimNoise& noise,
                                                    const OccupancyGrid& world, StreamRng& rng);

}  // namespace locnav
