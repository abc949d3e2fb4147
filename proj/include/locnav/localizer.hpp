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
#include <optional>

#include "locnav/amcl.hpp"

namespace locnav {

struct LocalizerUpdate {
  StepDiagnostics diagnostics;
  bool reinitialized = false;
  bool lost = false;
  bool searching = false;
  /// Inlier fraction of the scan at the mean estimate before any re-init.
  double inliers = 1.0;
};

/// Stateful AMCL front end: owns the current belief, the update counter used
/// to derive random streams, and the lost/search bookkeeping that drives
/// global re-initialization.
class Localizer {
 public:
  Localizer(AmclConfig cfg, OccupancyGrid map, std::uint64_t seed);

  void init_pose(const Pose2D& pose, const std::array<double, 3>& covariance);
  void init_global();
  /// Re-init seeded from the scan (see init_global_from_scan).
  void init_global(const LaserScan& z);
  /// Keeps keep_fraction of max_particles drawn from the current belief and
  /// fills the rest from the scan, then continues searching.
  void reseed(const LaserScan& z);

  LocalizerUpdate update(const OdometryReading& u, const LaserScan& z, double clock);

  const Belief& belief() const { return belief_; }
  PoseEstimate estimate() const { return locnav::estimate(belief_, cfg_.convergence_threshold); }
  const AmclConfig& config() const { return cfg_; }
  const OccupancyGrid& map() const { return map_; }
  const DistanceField& field() const { return field_; }

  bool lost() const { return lost_; }
  bool searching() const { return searching_; }
  /// Clock of the first update of the current lost episode.
  std::optional<double> lost_since() const { return lost_since_; }
  std::uint64_t steps() const { return step_; }
  std::uint64_t global_inits() const { return global_inits_; }

 private:
  void start_search();

  AmclConfig cfg_;
  OccupancyGrid map_;
  DistanceField field_;
  std::uint64_t seed_;
  std::uint64_t step_ = 0;
  std::uint64_t global_inits_ = 0;
  Belief belief_;
  int poor_fit_ = 0;
  int search_updates_ = 0;
  int accept_run_ = 0;
  bool lost_ = false;
  bool searching_ = false;
  std::optional<double> lost_since_;
};

}  // namespace locnav
