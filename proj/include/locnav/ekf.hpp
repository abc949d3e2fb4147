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

#include "locnav/motion_model.hpp"
#include "locnav/pose.hpp"

namespace locnav {

/// Mean (x, y, theta) and covariance of a unimodal pose belief.
struct GaussianBelief {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();

  Pose2D pose() const { return {mean(0), mean(1), mean(2)}; }
  static GaussianBelief from_pose(const Pose2D& p, const Eigen::Matrix3d& cov);
};

/// Range-bearing measurement of a known landmark.
struct LandmarkObservation {
  int landmark_id = 0;
  double range = 0.0;
  double bearing = 0.0;
  double var_range = 0.01;
  double var_bearing = 0.001;
};

/// Jacobians of the odometry composition w.r.t. the state (G) and the
/// (rot1, trans, rot2) control (V).
struct MotionJacobians {
  Eigen::Matrix3d state;
  Eigen::Matrix3d control;
};

MotionJacobians motion_jacobians(const Eigen::Vector3d& mean, const OdometryDelta& delta);

/// Odometry prediction: the mean moves by the deterministic composition and
/// the covariance becomes G S G^T + V M V^T, M holding the motion-model variances.
GaussianBelief ekf_predict(const GaussianBelief& b, const OdometryReading& u, const MotionNoise& noise);

/// Predicted (range, bearing) of a landmark.
Eigen::Vector2d expected_observation(const Eigen::Vector3d& mean, const Eigen::Vector2d& landmark);
Eigen::Matrix<double, 2, 3> observation_jacobian(const Eigen::Vector3d& mean, const Eigen::Vector2d& landmark);

/// Squared Mahalanobis distance of the innovation, for gating outliers.
double innovation_distance(const GaussianBelief& b, const LandmarkObservation& obs, const Eigen::Vector2d& landmark);

/// Range-bearing update with a Joseph-form covariance. The bearing innovation
/// is wrapped before the gain multiply. Throws EkfError when the innovation
/// covariance is singular.
GaussianBelief ekf_update(const GaussianBelief& b, const LandmarkObservation& obs, const Eigen::Vector2d& landmark);

/// Range-only variant of ekf_update.
GaussianBelief ekf_update_range(const GaussianBelief& b, double range, double var_range,
                                const Eigen::Vector2d& landmark);

}  // namespace locnav
