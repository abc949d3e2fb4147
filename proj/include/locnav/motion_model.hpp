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

#include <array>

#include "locnav/pose.hpp"
#include "locnav/rng.hpp"

namespace locnav {

/// Two successive odometer poses, both in the odom frame.
struct OdometryReading {
  Pose2D prev;
  Pose2D curr;
};

/// odom_alpha1..4. alpha1: rotation noise from rotation, alpha2: rotation
/// noise from translation, alpha3: translation noise from translation,
/// alpha4: translation noise from rotation.
struct MotionNoise {
  double alpha1 = 0.005;
  double alpha2 = 0.005;
  double alpha3 = 0.010;
  double alpha4 = 0.005;

  bool valid() const { return alpha1 >= 0.0 && alpha2 >= 0.0 && alpha3 >= 0.0 && alpha4 >= 0.0; }
  static MotionNoise zero() { return {0.0, 0.0, 0.0, 0.0}; }
};

/// Rotate-translate-rotate factorization of an odometry reading.
struct OdometryDelta {
  double rot1 = 0.0;
  double trans = 0.0;
  double rot2 = 0.0;
};

/// Below this translation the first rotation is undefined; the whole heading
/// change goes to rot2.
inline constexpr double kPureRotationThreshold = 1e-6;

OdometryDelta decompose(const OdometryReading& u);

/// Advances `pose` by a rot1/trans/rot2 motion.
Pose2D apply_delta(const Pose2D& pose, const OdometryDelta& delta);

/// Below this translation the direction of travel is lost in odometry jitter,
/// so rot1 contributes no rotation noise and the whole heading change drives
/// the rot2 noise.
inline constexpr double kNoiseRotationThreshold = 0.01;

/// Variances of the rot1, trans and rot2 noise for this motion. Rotation
/// magnitudes are folded to [0, pi/2] first, so reversing counts as driving
/// forward.
std::array<double, 3> motion_variances(const OdometryDelta& delta, const MotionNoise& noise);

/// Samples a successor of `pose` under the odometry reading. Draws exactly
/// three Gaussians from `rng`, in the order rot1, trans, rot2.
Pose2D sample_motion(const OdometryReading& u, const MotionNoise& noise, const Pose2D& pose, StreamRng& rng);

}  // namespace locnav
