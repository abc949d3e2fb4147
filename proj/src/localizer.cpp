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

#include "locnav/localizer.hpp"

namespace locnav {

Localizer::Localizer(AmclConfig cfg, OccupancyGrid map, std::uint64_t seed)
    : cfg_(std::move(cfg)), map_(std::move(map)), seed_(seed) {
  cfg_.validate();
  field_ = build_distance_field(map_, cfg_.sensor.likelihood_max_dist);
  init_pose(cfg_.initial_pose, cfg_.initial_cov);
}

void Localizer::init_pose(const Pose2D& pose, const std::array<double, 3>& covariance) {
  StreamRng rng(seed_, StreamDomain::kPoseInit, 0, step_);
  belief_ = init_from_pose(cfg_, pose, covariance, rng);
  poor_fit_ = 0;
  searching_ = false;
  lost_ = false;
  lost_since_.reset();
}

void Localizer::init_global() {
  StreamRng rng(seed_, StreamDomain::kGlobalInit, global_inits_++, step_);
  belief_ = locnav::init_global(cfg_, map_, rng);
  start_search();
}

void Localizer::init_global(const LaserScan& z) {
  StreamRng rng(seed_, StreamDomain::kGlobalInit, global_inits_++, step_);
  belief_ = init_global_from_scan(cfg_, map_, field_, z, rng);
  start_search();
}

void Localizer::reseed(const LaserScan& z) {
  StreamRng rng(seed_, StreamDomain::kGlobalInit, global_inits_++, step_);
  const auto max_n = static_cast<std::size_t>(cfg_.max_particles);
  const auto keep = std::min(belief_.size(), static_cast<std::size_t>(cfg_.recovery.keep_fraction * max_n));
  std::vector<double> w;
  w.reserve(belief_.size());
  for (const Particle& p : belief_.particles) w.push_back(p.weight);
  Belief next;
  next.particles.reserve(max_n);
  for (std::size_t i : systematic_select(w, keep, rng.uniform())) next.particles.push_back(belief_.particles[i]);
  AmclConfig fill = cfg_;
  fill.max_particles = static_cast<int>(max_n - next.size());
  for (const Particle& p : init_global_from_scan(fill, map_, field_, z, rng).particles) next.particles.push_back(p);
  for (Particle& p : next.particles) p.weight = 1.0 / static_cast<double>(next.size());
  next.normalized = true;
  belief_ = std::move(next);
  start_search();
}

void Localizer::start_search() {
  poor_fit_ = 0;
  search_updates_ = 0;
  accept_run_ = 0;
  searching_ = true;
}

LocalizerUpdate Localizer::update(const OdometryReading& u, const LaserScan& z, double clock) {
  StepResult r = step(belief_, u, z, field_, map_, cfg_, StepContext{seed_, step_, clock});
  ++step_;
  belief_ = std::move(r.belief);

  LocalizerUpdate out;
  out.diagnostics = r.diagnostics;
  const auto& diag = r.diagnostics;
  const auto& rec = cfg_.recovery;
  const Pose2D sensor = estimate().mean.compose(cfg_.laser_offset);
  out.inliers = scan_inlier_fraction(z, sensor, field_, rec.inlier_distance);
  const bool poor = diag.all_weights_zero || out.inliers < rec.lost_inliers;

  if (searching_) {
    accept_run_ = out.inliers >= rec.accept_inliers && !diag.all_weights_zero ? accept_run_ + 1 : 0;
    poor_fit_ = poor ? poor_fit_ + 1 : 0;
    ++search_updates_;
    if (accept_run_ >= rec.accept_patience) {
      searching_ = false;
      lost_ = false;
      lost_since_.reset();
      poor_fit_ = 0;
    } else if (poor_fit_ >= rec.search_patience || search_updates_ >= rec.search_timeout) {
      reseed(z);
      out.reinitialized = true;
    }
  } else {
    poor_fit_ = poor ? poor_fit_ + 1 : 0;
    if (diag.all_weights_zero || poor_fit_ >= rec.lost_patience) {
      if (!lost_) lost_since_ = clock;
      lost_ = true;
      if (rec.global_reinit) {
        init_global(z);
        out.reinitialized = true;
      }
    } else if (!poor) {
      lost_ = false;
      lost_since_.reset();
    }
  }
  out.lost = lost_;
  out.searching = searching_;
  return out;
}

}  // namespace locnav
