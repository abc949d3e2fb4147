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
#include <vector>

#include "locnav/config.hpp"

namespace locnav {

/// Process exit codes of a scenario run.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitGoalNotReached = 1,
  kExitConfigError = 2,
  kExitNoPath = 3,
  kExitDiverged = 4,
};

struct ReplanRecord {
  double t = 0.0;
  std::string reason;
  Pose2D from;
  std::string result;
  double cost = 0.0;
};

struct EstimatorReport {
  std::string name;
  double mean_error = 0.0;
  double max_error = 0.0;
  double final_error = 0.0;
  double rmse = 0.0;
  std::optional<double> time_to_converge;
  /// Set only when the scenario contains a kidnap.
  std::optional<bool> recovered;
  std::optional<double> recovery_time;
  bool lost_at_end = false;
};

struct RunSummary {
  int exit_code = kExitSuccess;
  std::string exit_reason;
  bool success = false;
  double sim_time = 0.0;
  std::optional<double> time_to_converge;
  std::optional<double> time_to_goal;
  double final_error = 0.0;
  double final_heading_error = 0.0;
  std::optional<Pose2D> goal;
  /// True pose against the goal at the end of the run.
  std::optional<double> goal_distance;
  std::optional<double> goal_heading_error;
  std::vector<ReplanRecord> replans;
  /// Northward progress of the true pose before the first replan forced by
  /// an obstacle on the path.
  std::optional<double> blocked_replan_time;
  double north_progress_before_block = 0.0;
  std::optional<double> kidnap_time;
  std::size_t particles_min = 0;
  std::size_t particles_max = 0;
  std::optional<double> particles_median_converged;
  std::vector<EstimatorReport> estimators;
};

/// Runs one scenario and writes metrics.jsonl, trajectory.csv, summary.json,
/// map copies, paths and costmap snapshots into `out_dir` (created if needed).
/// compare.json is written too when both estimators ran.
RunSummary run_scenario(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Forces estimator = both and runs the scenario.
RunSummary compare_estimators(RunConfig cfg, const std::filesystem::path& out_dir);

struct BatchResult {
  std::uint64_t seed = 0;
  RunSummary summary;
};

/// Runs seeds [first, last] as independent jobs, `jobs` at a time, each into
/// `out_dir/seed_<n>`; writes out_dir/batch.json. Results are ordered by seed.
std::vector<BatchResult> run_batch(const RunConfig& cfg, std::uint64_t first, std::uint64_t last,
                                   const std::filesystem::path& out_dir, int jobs);

}  // namespace locnav
