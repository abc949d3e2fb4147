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

#include "locnav/motion_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace locnav {

OdometryDelta decompose(const OdometryReading& u) {
  const double dx = u.curr.x() - u.prev.x();
  const double dy = u.curr.y() - u.prev.y();
  OdometryDelta d;
  d.trans = std::hypot(dx, dy);
  if (d.trans < kPureRotationThreshold) {
    d.rot1 = 0.0;
  } else {
    d.rot1 = angle_diff(std::atan2(dy, dx), u.prev.theta());
  }
  d.rot2 = normalize_angle(u.curr.theta() - u.prev.theta() - d.rot1);
  return d;
}

Pose2D apply_delta(const Pose2D& pose, const OdometryDelta& delta) {
  const double heading = pose.theta() + delta.rot1;
  return {pose.x() + delta.trans * std::cos(heading), pose.y() + delta.trans * std::sin(heading),
          heading + delta.rot2};
}

namespace {

double folded(double rot) {
  const double a = std::abs(normalize_angle(rot));
  return std::min(a, std::numbers::pi - a);
}

}  // namespace

std::array<double, 3> motion_variances(const OdometryDelta& d, const MotionNoise& n) {
  const bool short_move = d.trans < kNoiseRotationThreshold;
  const double f1 = short_move ? 0.0 : folded(d.rot1);
  const double f2 = short_move ? folded(d.rot1 + d.rot2) : folded(d.rot2);
  const double r1 = f1 * f1;
  const double t = d.trans * d.trans;
  const double r2 = f2 * f2;
  return {n.alpha1 * r1 + n.alpha2 * t, n.alpha3 * t + n.alpha4 * (r1 + r2), n.alpha1 * r2 + n.alpha2 * t};
}

Pose2D sample_motion(const OdometryReading& u, const MotionNoise& noise, const Pose2D& pose, StreamRng& rng) {
  const OdometryDelta d = decompose(u);
  const auto var = motion_variances(d, noise);
  // Always draw three variates so stream positions are independent of the motion.
  const double n1 = rng.gaussian();
  const double n2 = rng.gaussian();
  const double n3 = rng.gaussian();
  OdometryDelta noisy;
  noisy.rot1 = d.rot1 + std::sqrt(var[0]) * n1;
  noisy.trans = d.trans + std::sqrt(var[1]) * n2;
  noisy.rot2 = d.rot2 + std::sqrt(var[2]) * n3;
  return apply_delta(pose, noisy);
}

}  // namespace locnav
