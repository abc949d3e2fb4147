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

#include <cmath>
#include <numbers>

namespace locnav {

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

/// Signed smallest difference a - b, wrapped into (-pi, pi].
inline double angle_diff(double a, double b) { return normalize_angle(a - b); }

/// Planar pose. The heading is kept in (-pi, pi] by every constructor and
/// operation, so it is only reachable through accessors.
class Pose2D {
 public:
  constexpr Pose2D() = default;
  Pose2D(double x, double y, double theta) : x_(x), y_(y), theta_(normalize_angle(theta)) {}

  double x() const { return x_; }
  double y() const { return y_; }
  double theta() const { return theta_; }

  /// this (+) other: `other` is expressed in this pose's frame.
  Pose2D compose(const Pose2D& other) const {
    const double c = std::cos(theta_);
    const double s = std::sin(theta_);
    return {x_ + c * other.x_ - s * other.y_, y_ + s * other.x_ + c * other.y_,
            theta_ + other.theta_};
  }

  Pose2D inverse() const {
    const double c = std::cos(theta_);
    const double s = std::sin(theta_);
    return {-c * x_ - s * y_, s * x_ - c * y_, -theta_};
  }

  /// Pose of `other` relative to this one: inverse() (+) other.
  Pose2D between(const Pose2D& other) const { return inverse().compose(other); }

  /// Maps a point from this pose's frame into the parent frame.
  void transform_point(double lx, double ly, double& wx, double& wy) const {
    const double c = std::cos(theta_);
    const double s = std::sin(theta_);
    wx = x_ + c * lx - s * ly;
    wy = y_ + s * lx + c * ly;
  }

  double distance_to(const Pose2D& other) const { return std::hypot(other.x_ - x_, other.y_ - y_); }

  bool operator==(const Pose2D&) const = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

}  // namespace locnav
