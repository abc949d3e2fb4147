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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locnav/amcl.hpp"
#include "locnav/nav.hpp"
#include "locnav/sim.hpp"

namespace locnav {

enum class Estimator { kAmcl, kEkf, kBoth };
Estimator parse_estimator(const std::string& s);
std::string to_string(Estimator e);

/// nav: the controller drives from the primary estimate.
/// teleop: scripted velocity segments drive the robot regardless of estimates.
enum class DriveMode { kNav, kTeleop };
DriveMode parse_drive_mode(const std::string& s);
std::string to_string(DriveMode d);

struct EkfSettings {
  /// Landmark table: "maze", "corridor" or an explicit list.
  std::vector<Landmark> landmarks;
  double landmark_max_range = 6.0;
  /// Chi-square threshold on the squared innovation distance.
  double gate = 9.21;
  MotionNoise motion_noise;
  /// Consecutive scans whose every observation was gated out before the
  /// EKF counts as lost.
  int lost_patience = 5;
};

struct RunConfig {
  std::filesystem::path config_path;
  std::filesystem::path map_path;
  /// Ground truth for the simulator; equals map_path unless given.
  std::filesystem::path world_path;
  std::string robot_name = "udacity_bot";
  RobotConfig robot;
  AmclConfig amcl;
  /// Start with a uniform belief instead of the initial pose.
  bool global_localization = false;
  CostmapConfig costmap;
  GoalTolerance tolerance;
  ControllerConfig controller;
  /// Seconds between unconditional replans; 0 plans only on a new goal, a
  /// blocked or lost path, or a failed attempt.
  double replan_period = 0.0;
  double no_path_timeout = 30.0;
  /// A primary estimator lost for longer than this at the end of the run
  /// yields exit code 4.
  double lost_timeout = 20.0;
  /// Window after a kidnap in which recovery must happen.
  double recovery_window = 20.0;
  double recovery_error = 0.5;
  /// Seconds the recovery condition must hold continuously.
  double recovery_hold = 1.0;
  double converge_error = 0.3;
  Estimator estimator = Estimator::kAmcl;
  DriveMode drive = DriveMode::kNav;
  std::uint64_t seed = 0;
  double duration = 300.0;
  double control_rate = 20.0;
  double scan_rate = 10.0;
  Pose2D start;
  SimNoise sim_noise;
  EkfSettings ekf;
  std::vector<ScenarioEvent> events;
  std::string output_dir = "run";
  /// Costmap snapshot cadence in seconds; 0 writes only the final maps.
  double snapshot_period = 0.0;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Parses a scenario file. Relative paths resolve against `base_dir`.
/// `robot_override` replaces the robot preset before move_base overrides
/// are applied. Throws ConfigError.
RunConfig parse_run_config(std::string_view yaml_text, const std::filesystem::path& base_dir,
                           const std::optional<std::string>& robot_override = std::nullopt);
RunConfig load_run_config(const std::filesystem::path& path,
                          const std::optional<std::string>& robot_override = std::nullopt);

/// `LOCNAV_OUTPUT_ROOT` joined with the configured output directory, or the
/// directory itself when the variable is unset or it is absolute.
std::filesystem::path resolve_output_dir(const std::string& output_dir);

}  // namespace locnav
