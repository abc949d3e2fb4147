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
#include <string>
#include <vector>

#include "locnav/distance_field.hpp"
#include "locnav/occupancy_grid.hpp"
#include "locnav/pose.hpp"

namespace locnav {

/// One planar range scan. Bearings are in the sensor frame.
struct LaserScan {
  std::vector<double> bearings;
  std::vector<double> ranges;
  double range_min = 0.1;
  double range_max = 30.0;
  double stamp = 0.0;
};

enum class LaserModelType { kLikelihoodField, kBeam };

LaserModelType parse_laser_model_type(const std::string& name);
std::string to_string(LaserModelType type);

/// laser_* parameters. Defaults are the tuned AMCL values.
struct SensorModelConfig {
  double z_hit = 0.95;
  double z_short = 0.1;
  double z_max = 0.05;
  double z_rand = 0.5;
  double sigma_hit = 0.2;
  double lambda_short = 0.1;
  int max_beams = 30;
  LaserModelType model_type = LaserModelType::kLikelihoodField;
  double likelihood_max_dist = 2.0;
  /// Width of the max-range point mass in the beam model (meters).
  double max_range_width = 1.0;

  /// Throws ConfigError on a violated invariant.
  void validate() const;
};

/// Indices of at most max_beams evenly spaced beams out of `count`.
std::vector<std::size_t> select_beams(std::size_t count, int max_beams);

/// Per-beam likelihood-field probability for an endpoint `d` meters from the
/// nearest obstacle: z_hit * exp(-d^2 / (2 sigma^2)) + z_rand / range_max.
double likelihood_field_beam_prob(double d, double range_max, const SensorModelConfig& cfg);

/// Log-likelihood plus the number of beams that contributed.
struct ScanLikelihood {
  double log_weight = 0.0;
  std::size_t beams_used = 0;
};

/// Likelihood-field model. `pose` is the sensor pose in the world frame.
/// Beams at range_max are skipped; an empty beam set has weight 1.
ScanLikelihood likelihood_field_log_weight(const LaserScan& scan, const Pose2D& pose, const DistanceField& field,
                                           const SensorModelConfig& cfg);
double likelihood_field_weight(const LaserScan& scan, const Pose2D& pose, const DistanceField& field,
                               const SensorModelConfig& cfg);

/// Fraction of the beams below range_max whose endpoint lies within
/// `inlier_distance` of an obstacle. Uses every beam; 1 when none is in range.
double scan_inlier_fraction(const LaserScan& scan, const Pose2D& pose, const DistanceField& field,
                            double inlier_distance);

/// Four-component beam mixture density for one measured range given the
/// expected range; the z_* weights are renormalized to sum to one.
double beam_density(double z, double z_expected, double range_max, const SensorModelConfig& cfg);

ScanLikelihood beam_model_log_weight(const LaserScan& scan, const Pose2D& pose, const OccupancyGrid& grid,
                                     const SensorModelConfig& cfg);
double beam_model_weight(const LaserScan& scan, const Pose2D& pose, const OccupancyGrid& grid,
                         const SensorModelConfig& cfg);

}  // namespace locnav
