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

#include "locnav/ekf.hpp"

#include <Eigen/LU>
#include <cmath>

#include "locnav/error.hpp"

namespace locnav {

GaussianBelief GaussianBelief::from_pose(const Pose2D& p, const Eigen::Matrix3d& cov) {
  GaussianBelief b;
  b.mean = Eigen::Vector3d(p.x(), p.y(), p.theta());
  b.covariance = cov;
  return b;
}

MotionJacobians motion_jacobians(const Eigen::Vector3d& mean, const OdometryDelta& d) {
  const double heading = mean(2) + d.rot1;
  const double s = std::sin(heading);
  const double c = std::cos(heading);
  MotionJacobians j;
  j.state << 1.0, 0.0, -d.trans * s,
             0.0, 1.0, d.trans * c,
             0.0, 0.0, 1.0;
  j.control << -d.trans * s, c, 0.0,
               d.trans * c, s, 0.0,
               1.0, 0.0, 1.0;
  return j;
}

GaussianBelief ekf_predict(const GaussianBelief& b, const OdometryReading& u, const MotionNoise& noise) {
  const OdometryDelta d = decompose(u);
  const MotionJacobians j = motion_jacobians(b.mean, d);
  const auto var = motion_variances(d, noise);
  const Pose2D next = apply_delta(b.pose(), d);
  GaussianBelief out;
  out.mean = Eigen::Vector3d(next.x(), next.y(), next.theta());
  const Eigen::Matrix3d m = Eigen::Vector3d(var[0], var[1], var[2]).asDiagonal();
  out.covariance = j.state * b.covariance * j.state.transpose() + j.control * m * j.control.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

Eigen::Vector2d expected_observation(const Eigen::Vector3d& mean, const Eigen::Vector2d& landmark) {
  const double dx = landmark(0) - mean(0);
  const double dy = landmark(1) - mean(1);
  return {std::hypot(dx, dy), angle_diff(std::atan2(dy, dx), mean(2))};
}

Eigen::Matrix<double, 2, 3> observation_jacobian(const Eigen::Vector3d& mean, const Eigen::Vector2d& landmark) {
  const double dx = landmark(0) - mean(0);
  const double dy = landmark(1) - mean(1);
  const double q = dx * dx + dy * dy;
  if (!(q > 0.0)) throw EkfError("landmark coincides with the robot position");
  const double r = std::sqrt(q);
  Eigen::Matrix<double, 2, 3> h;
  h << -dx / r, -dy / r, 0.0,
       dy / q, -dx / q, -1.0;
  return h;
}

namespace {

template <int N>
GaussianBelief joseph_update(const GaussianBelief& b, const Eigen::Matrix<double, N, 1>& innovation,
                             const Eigen::Matrix<double, N, 3>& h, const Eigen::Matrix<double, N, N>& r) {
  const Eigen::Matrix<double, N, N> s = h * b.covariance * h.transpose() + r;
  Eigen::FullPivLU<Eigen::Matrix<double, N, N>> lu(s);
  if (!lu.isInvertible() || !(std::abs(s.determinant()) > 1e-300)) {
    throw EkfError("singular innovation covariance");
  }
  const Eigen::Matrix<double, 3, N> k = b.covariance * h.transpose() * lu.inverse();
  GaussianBelief out;
  out.mean = b.mean + k * innovation;
  out.mean(2) = normalize_angle(out.mean(2));
  const Eigen::Matrix3d ikh = Eigen::Matrix3d::Identity() - k * h;
  out.covariance = ikh * b.covariance * ikh.transpose() + k * r * k.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

}  // namespace

double innovation_distance(const GaussianBelief& b, const LandmarkObservation& obs, const Eigen::Vector2d& landmark) {
  const Eigen::Vector2d z_hat = expected_observation(b.mean, landmark);
  const Eigen::Vector2d nu(obs.range - z_hat(0), angle_diff(obs.bearing, z_hat(1)));
  const Eigen::Matrix<double, 2, 3> h = observation_jacobian(b.mean, landmark);
  const Eigen::Matrix2d s =
      h * b.covariance * h.transpose() + Eigen::Vector2d(obs.var_range, obs.var_bearing).asDiagonal().toDenseMatrix();
  Eigen::FullPivLU<Eigen::Matrix2d> lu(s);
  if (!lu.isInvertible()) throw EkfError("singular innovation covariance");
  return nu.dot(lu.solve(nu));
}

GaussianBelief ekf_update(const GaussianBelief& b, const LandmarkObservation& obs, const Eigen::Vector2d& landmark) {
  const Eigen::Vector2d z_hat = expected_observation(b.mean, landmark);
  const Eigen::Vector2d nu(obs.range - z_hat(0), angle_diff(obs.bearing, z_hat(1)));
  const Eigen::Matrix<double, 2, 3> h = observation_jacobian(b.mean, landmark);
  const Eigen::Matrix2d r = Eigen::Vector2d(obs.var_range, obs.var_bearing).asDiagonal();
  return joseph_update<2>(b, nu, h, r);
}

GaussianBelief ekf_update_range(const GaussianBelief& b, double range, double var_range,
                                const Eigen::Vector2d& landmark) {
  const Eigen::Matrix<double, 2, 3> full = observation_jacobian(b.mean, landmark);
  const Eigen::Matrix<double, 1, 3> h = full.row(0);
  const Eigen::Matrix<double, 1, 1> nu(range - expected_observation(b.mean, landmark)(0));
  const Eigen::Matrix<double, 1, 1> r(var_range);
  return joseph_update<1>(b, nu, h, r);
}

}  // namespace locnav
