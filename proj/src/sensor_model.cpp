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

#include "locnav/sensor_model.hpp"

#include <cmath>
#include <numbers>

#include "locnav/error.hpp"
#include "locnav/raycast.hpp"

namespace locnav {

LaserModelType parse_laser_model_type(const std::string& name) {
  if (name == "likelihood_field") return LaserModelType::kLikelihoodField;
  if (name == "beam") return LaserModelType::kBeam;
  throw ConfigError("unknown laser_model_type: " + name);
}

std::string to_string(LaserModelType type) {
  return type == LaserModelType::kBeam ? "beam" : "likelihood_field";
}

void SensorModelConfig::validate() const {
  if (z_hit < 0 || z_short < 0 || z_max < 0 || z_rand < 0) throw ConfigError("laser_z_* must be >= 0");
  if (!(sigma_hit > 0)) throw ConfigError("laser_sigma_hit must be > 0");
  if (!(lambda_short > 0)) throw ConfigError("laser_lambda_short must be > 0");
  if (max_beams < 1) throw ConfigError("laser_max_beams must be >= 1");
  if (!(likelihood_max_dist > 0)) throw ConfigError("laser_likelihood_max_dist must be > 0");
  if (!(max_range_width > 0)) throw ConfigError("max_range_width must be > 0");
}

std::vector<std::size_t> select_beams(std::size_t count, int max_beams) {
  std::vector<std::size_t> idx;
  if (count == 0 || max_beams <= 0) return idx;
  const std::size_t m = static_cast<std::size_t>(max_beams);
  if (m >= count) {
    idx.resize(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    return idx;
  }
  idx.reserve(m);
  for (std::size_t k = 0; k < m; ++k) idx.push_back(k * count / m);
  return idx;
}

double likelihood_field_beam_prob(double d, double range_max, const SensorModelConfig& cfg) {
  return cfg.z_hit * std::exp(-(d * d) / (2.0 * cfg.sigma_hit * cfg.sigma_hit)) + cfg.z_rand / range_max;
}

ScanLikelihood likelihood_field_log_weight(const LaserScan& scan, const Pose2D& pose, const DistanceField& field,
                                           const SensorModelConfig& cfg) {
  ScanLikelihood out;
  for (std::size_t i : select_beams(scan.ranges.size(), cfg.max_beams)) {
    const double r = scan.ranges[i];
    if (!(r < scan.range_max)) continue;
    const double a = pose.theta() + scan.bearings[i];
    const double ex = pose.x() + r * std::cos(a);
    const double ey = pose.y() + r * std::sin(a);
    const double d = std::min(field.lookup(ex, ey), cfg.likelihood_max_dist);
    out.log_weight += std::log(likelihood_field_beam_prob(d, scan.range_max, cfg));
    ++out.beams_used;
  }
  return out;
}

double likelihood_field_weight(const LaserScan& scan, const Pose2D& pose, const DistanceField& field,
                               const SensorModelConfig& cfg) {
  return std::exp(likelihood_field_log_weight(scan, pose, field, cfg).log_weight);
}

double scan_inlier_fraction(const LaserScan& scan, const Pose2D& pose, const DistanceField& field,
                            double inlier_distance) {
  std::size_t used = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = scan.ranges[i];
    if (!(r < scan.range_max)) continue;
    const double a = pose.theta() + scan.bearings[i];
    ++used;
    if (field.lookup(pose.x() + r * std::cos(a), pose.y() + r * std::sin(a)) <= inlier_distance) ++hits;
  }
  return used == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(used);
}

double beam_density(double z, double z_expected, double range_max, const SensorModelConfig& cfg) {
  const double total = cfg.z_hit + cfg.z_short + cfg.z_max + cfg.z_rand;
  if (!(total > 0.0)) return 0.0;
  const double s = cfg.sigma_hit;
  const double diff = z - z_expected;
  const double p_hit = std::exp(-(diff * diff) / (2.0 * s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
  double p_short = 0.0;
  if (z <= z_expected && z_expected > 0.0) {
    const double l = cfg.lambda_short;
    p_short = l * std::exp(-l * z) / (1.0 - std::exp(-l * z_expected));
  }
  const bool at_max = z >= range_max;
  const double p_max = at_max ? 1.0 / cfg.max_range_width : 0.0;
  const double p_rand = at_max ? 0.0 : 1.0 / range_max;
  return (cfg.z_hit * p_hit + cfg.z_short * p_short + cfg.z_max * p_max + cfg.z_rand * p_rand) / total;
}

ScanLikelihood beam_model_log_weight(const LaserScan& scan, const Pose2D& pose, const OccupancyGrid& grid,
                                     const SensorModelConfig& cfg) {
  ScanLikelihood out;
  if (!grid.world_to_grid(pose.x(), pose.y())) {
    // A sensor outside the map sees nothing we can predict: every beam is max range.
    for (std::size_t i : select_beams(scan.ranges.size(), cfg.max_beams)) {
      out.log_weight += std::log(beam_density(scan.ranges[i], scan.range_max, scan.range_max, cfg));
      ++out.beams_used;
    }
    return out;
  }
  for (std::size_t i : select_beams(scan.ranges.size(), cfg.max_beams)) {
    const double expected = raycast(grid, pose, scan.bearings[i], scan.range_max);
    out.log_weight += std::log(beam_density(scan.ranges[i], expected, scan.range_max, cfg));
    ++out.beams_used;
  }
  return out;
}

double beam_model_weight(const LaserScan& scan, const Pose2D& pose, const OccupancyGrid& grid,
                         const SensorModelConfig& cfg) {
  return std::exp(beam_model_log_weight(scan, pose, grid, cfg).log_weight);
}

}  // namespace locnav
