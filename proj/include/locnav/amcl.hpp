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

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "locnav/distance_field.hpp"
#include "locnav/motion_model.hpp"
#include "locnav/occupancy_grid.hpp"
#include "locnav/rng.hpp"
#include "locnav/sensor_model.hpp"

namespace locnav {

struct Particle {
  Pose2D pose;
  double weight = 0.0;
};

/// Weighted particle set. Filter operations return a new Belief and never
/// modify their input.
struct Belief {
  std::vector<Particle> particles;
  bool normalized = false;

  std::size_t size() const { return particles.size(); }
  bool empty() const { return particles.empty(); }
  double weight_sum() const;
};

enum class ResamplerType { kSystematic, kMultinomial };

/// When the scan no longer fits the belief, optionally restart from a
/// uniform global belief (kidnapped-robot recovery).
struct RecoveryConfig {
  bool global_reinit = false;
  /// A beam is an inlier when its endpoint, seen from the mean estimate, lies
  /// within this distance of an obstacle. Every beam of the scan is checked.
  double inlier_distance = 0.2;
  /// Inlier fraction below which an update counts as a poor fit.
  double lost_inliers = 0.6;
  /// Consecutive poor-fit updates before the filter is declared lost.
  int lost_patience = 3;
  /// While searching, consecutive poor-fit updates before a re-init.
  int search_patience = 3;
  /// While searching, updates since the last re-init after which the search
  /// is reseeded even without a poor fit.
  int search_timeout = 30;
  /// Inlier fraction that ends a search once held for accept_patience
  /// consecutive updates.
  double accept_inliers = 0.95;
  int accept_patience = 3;
  /// Share of max_particles carried over from the current belief when a
  /// search is reseeded; the rest is drawn fresh.
  double keep_fraction = 0.5;
  /// A re-init scores candidates_per_particle * max_particles uniform draws
  /// against the current scan and keeps the best max_particles. 1 gives a
  /// plain uniform re-init.
  int candidates_per_particle = 20;
};

/// AMCL parameters. Defaults are the tuned values of the benchmark robot.
struct AmclConfig {
  int min_particles = 25;
  int max_particles = 200;
  Pose2D initial_pose{0.0, 0.0, 0.0};
  /// initial_cov_xx, initial_cov_yy, initial_cov_aa
  std::array<double, 3> initial_cov{0.25, 0.25, 0.04};
  double kld_err = 0.05;
  /// Upper standard-normal quantile z_{1-delta}.
  double kld_z = 2.326;
  /// KLD histogram bin sizes: x (m), y (m), heading (rad).
  std::array<double, 3> bin_sizes{0.5, 0.5, std::numbers::pi / 12.0};
  int resample_interval = 2;
  /// Maximum scan age in seconds.
  double transform_tolerance = 0.2;
  MotionNoise motion_noise;
  SensorModelConfig sensor;
  ResamplerType resampler = ResamplerType::kSystematic;
  /// Largest positional standard deviation (m) for a converged estimate.
  double convergence_threshold = 0.3;
  /// Laser pose in the robot frame.
  Pose2D laser_offset;
  /// Threads used for the motion/weighting loop. Results do not depend on it.
  int workers = 1;
  RecoveryConfig recovery;

  void validate() const;
};

/// Identifies one filter update for random-stream derivation and staleness checks.
struct StepContext {
  std::uint64_t seed = 0;
  std::uint64_t step_index = 0;
  double clock = 0.0;
};

struct StepDiagnostics {
  bool all_weights_zero = false;
  bool resampled = false;
  std::size_t occupied_bins = 0;
  /// Best per-particle mean log-likelihood per used beam (0 if no beams used).
  double best_fit = 0.0;
  std::size_t beams_used = 0;
};

struct StepResult {
  Belief belief;
  StepDiagnostics diagnostics;
};

struct PoseEstimate {
  Pose2D mean;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  bool converged = false;

  /// Square root of the largest eigenvalue of the positional block.
  double position_spread() const;
};

Belief init_from_pose(const AmclConfig& cfg, const Pose2D& pose, const std::array<double, 3>& covariance,
                      StreamRng& rng);

/// Uniform over Free cells with uniform headings. Throws MapError when the
/// map has no Free cell.
Belief init_global(const AmclConfig& cfg, const OccupancyGrid& grid, StreamRng& rng);

/// Global set seeded from the scan: draws candidates_per_particle times
/// max_particles uniform poses and keeps the max_particles best by scan fit,
/// with equal weights. Ties go to the earlier draw.
Belief init_global_from_scan(const AmclConfig& cfg, const OccupancyGrid& grid, const DistanceField& field,
                             const LaserScan& z, StreamRng& rng);

/// KLD-sampling bound for k occupied histogram bins, clamped to
/// [min_particles, max_particles].
std::size_t kld_sample_size(std::size_t k, const AmclConfig& cfg);

std::size_t count_occupied_bins(std::span<const Particle> particles, const std::array<double, 3>& bin_sizes);

/// Low-variance resampler: n positions (u0 + m) / n, m = 0..n-1, over the
/// cumulative weights. Returns the selected source indices. u0 in [0, 1).
std::vector<std::size_t> systematic_select(std::span<const double> weights, std::size_t n, double u0);

/// Independent draws proportional to weight.
std::vector<std::size_t> multinomial_select(std::span<const double> weights, std::size_t n, StreamRng& rng);

/// KLD-adaptive resampling of a weighted set: the occupied-bin count of a
/// max_particles draw sets the output size.
Belief resample(const Belief& belief, const AmclConfig& cfg, const StepContext& ctx,
                std::size_t* occupied_bins = nullptr);

/// One filter update: motion and sensor update for every particle, weight
/// normalization, then KLD resampling on every resample_interval-th call.
/// Throws StaleScanError if the scan is older than transform_tolerance.
/// If every weight vanishes the weights are reset to uniform and
/// diagnostics.all_weights_zero is set.
StepResult step(const Belief& belief, const OdometryReading& u, const LaserScan& z, const DistanceField& field,
                const OccupancyGrid& grid, const AmclConfig& cfg, const StepContext& ctx);

/// Weighted mean (circular for heading), covariance and convergence flag.
/// Throws Error on an empty belief.
PoseEstimate estimate(const Belief& belief, double convergence_threshold = 0.3);

}  // namespace locnav
