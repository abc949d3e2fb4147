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

#include "locnav/sim.hpp"

#include <algorithm>
#include <cmath>

#include "locnav/error.hpp"
#include "locnav/raycast.hpp"

namespace locnav {

std::vector<double> LaserSpec::bearings() const {
  std::vector<double> out(static_cast<std::size_t>(beams));
  if (beams == 1) {
    out[0] = 0.0;
    return out;
  }
  for (int i = 0; i < beams; ++i) out[static_cast<std::size_t>(i)] = -0.5 * fov + fov * i / (beams - 1);
  return out;
}

void LaserSpec::validate() const {
  if (beams < 1) throw ConfigError("laser needs at least one beam");
  if (!(fov > 0) || fov > 2.0 * std::numbers::pi) throw ConfigError("laser fov must be in (0, 2pi]");
  if (!(range_min >= 0) || !(range_max > range_min)) throw ConfigError("laser range limits out of order");
}

double RobotConfig::half_diagonal() const { return 0.5 * std::hypot(chassis_length, chassis_width); }

void RobotConfig::validate() const {
  for (double d : {chassis_length, chassis_width, chassis_height, wheel_radius, wheel_length, caster_radius}) {
    if (!(d > 0)) throw ConfigError("robot dimensions must be > 0");
  }
  if (footprint_radius < half_diagonal() - 1e-12) throw ConfigError("footprint_radius below half the chassis diagonal");
  if (!(speed_scale > 0)) throw ConfigError("speed_scale must be > 0");
  laser.validate();
  costmap.validate();
}

RobotConfig RobotConfig::udacity_bot() {
  RobotConfig r;
  r.name = "udacity_bot";
  r.footprint_radius = r.half_diagonal();
  r.costmap = CostmapConfig::udacity_bot();
  return r;
}

RobotConfig RobotConfig::sagar_bot() {
  RobotConfig r;
  r.name = "sagar_bot";
  r.chassis_width = 0.4;
  r.caster_radius = 0.05;
  r.footprint_radius = r.half_diagonal();
  r.costmap = CostmapConfig::sagar_bot();
  return r;
}

RobotConfig RobotConfig::preset(const std::string& name) {
  if (name == "udacity_bot") return udacity_bot();
  if (name == "sagar_bot") return sagar_bot();
  throw ConfigError("unknown robot preset: " + name);
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::kSetGoal: return "goal";
    case EventKind::kKidnap: return "kidnap";
    case EventKind::kTeleop: return "teleop";
  }
  return "unknown";
}

namespace {

constexpr double kEventEpsilon = 1e-9;

void fire_due(SimState& s) {
  std::size_t n = 0;
  while (n < s.pending.size() && s.pending[n].time <= s.clock + kEventEpsilon) {
    const ScenarioEvent& e = s.pending[n];
    switch (e.kind) {
      case EventKind::kSetGoal:
        s.goal = e.pose;
        break;
      case EventKind::kKidnap:
        s.true_pose = e.pose;
        break;
      case EventKind::kTeleop:
        s.teleop = TeleopCommand{e.v, e.omega, e.time + e.duration};
        break;
    }
    s.fired.push_back(e);
    ++n;
  }
  s.pending.erase(s.pending.begin(), s.pending.begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace

SimState make_sim_state(const Pose2D& start, std::uint64_t seed, std::vector<ScenarioEvent> events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time < events[i - 1].time) throw ConfigError("scenario event times must be non-decreasing");
  }
  SimState s;
  s.true_pose = start;
  s.odom_pose = start;
  s.seed = seed;
  s.pending = std::move(events);
  fire_due(s);
  return s;
}

Pose2D integrate_unicycle(const Pose2D& p, double v, double omega, double dt) {
  const double th = p.theta();
  if (std::abs(omega) < 1e-12) {
    return {p.x() + v * dt * std::cos(th), p.y() + v * dt * std::sin(th), th};
  }
  const double r = v / omega;
  const double th1 = th + omega * dt;
  return {p.x() + r * (std::sin(th1) - std::sin(th)), p.y() - r * (std::cos(th1) - std::cos(th)), th1};
}

bool footprint_collides(const OccupancyGrid& world, double x, double y, double radius) {
  const GridGeometry& g = world.geometry();
  const double res = g.resolution();
  double mx = 0.0;
  double my = 0.0;
  g.world_to_map(x, y, mx, my);
  if (mx - radius < 0.0 || my - radius < 0.0 || mx + radius > g.width() * res || my + radius > g.height() * res) {
    return true;
  }
  const int c0 = static_cast<int>(std::floor((mx - radius) / res));
  const int c1 = static_cast<int>(std::floor((mx + radius) / res));
  const int r0 = static_cast<int>(std::floor((my - radius) / res));
  const int r1 = static_cast<int>(std::floor((my + radius) / res));
  const double r2 = radius * radius;
  for (int row = std::max(0, r0); row <= std::min(g.height() - 1, r1); ++row) {
    for (int col = std::max(0, c0); col <= std::min(g.width() - 1, c1); ++col) {
      if (world.at(col, row) != Cell::kOccupied) continue;
      const double nx = std::clamp(mx, col * res, (col + 1) * res);
      const double ny = std::clamp(my, row * res, (row + 1) * res);
      if ((nx - mx) * (nx - mx) + (ny - my) * (ny - my) < r2) return true;
    }
  }
  return false;
}

namespace {

bool arc_is_free(const OccupancyGrid& world, const Pose2D& p, double v, double omega, double dt, double radius) {
  const double step = 0.25 * world.resolution();
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(v) * dt / step)));
  for (int i = 1; i <= n; ++i) {
    const Pose2D q = integrate_unicycle(p, v, omega, dt * i / n);
    if (footprint_collides(world, q.x(), q.y(), radius)) return false;
  }
  return true;
}

}  // namespace

SimState sim_step(const SimState& state, double v, double omega, double dt, const OccupancyGrid& world,
                  const RobotConfig& robot, const SimNoise& noise) {
  if (!(dt > 0)) throw Error("sim_step needs dt > 0");
  SimState s = state;
  s.fired.clear();

  double fraction = 1.0;
  if (v != 0.0 && !arc_is_free(world, s.true_pose, v, omega, dt, robot.footprint_radius)) {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 30; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (arc_is_free(world, s.true_pose, v, omega, dt * mid, robot.footprint_radius)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    fraction = lo;
  }
  const Pose2D prev = s.true_pose;
  s.true_pose = integrate_unicycle(prev, v, omega, dt * fraction);
  s.executed_fraction = fraction;

  StreamRng rng(s.seed, StreamDomain::kSimOdometry, 0, s.tick);
  s.odom_pose = sample_motion(OdometryReading{prev, s.true_pose}, noise.odometry, s.odom_pose, rng);

  s.clock += dt;
  ++s.tick;
  fire_due(s);
  return s;
}

LaserScan simulate_scan(const SimState& state, const OccupancyGrid& world, const RobotConfig& robot, double sigma,
                        StreamRng& rng) {
  const Pose2D sensor = state.true_pose.compose(robot.laser_mount);
  LaserScan scan;
  scan.bearings = robot.laser.bearings();
  scan.range_min = robot.laser.range_min;
  scan.range_max = robot.laser.range_max;
  scan.stamp = state.clock;
  scan.ranges.reserve(scan.bearings.size());
  for (double b : scan.bearings) {
    double r = raycast(world, sensor, b, scan.range_max);
    if (r < scan.range_max) {
      r = std::clamp(r + rng.gaussian(sigma), scan.range_min, scan.range_max);
    }
    scan.ranges.push_back(r);
  }
  return scan;
}

std::vector<LandmarkObservation> simulate_landmarks(const SimState& state, std::span<const Landmark> landmarks,
                                                    double max_range, const SimNoise& noise,
                                                    const OccupancyGrid& world, StreamRng& rng) {
  std::vector<LandmarkObservation> out;
  const Pose2D& p = state.true_pose;
  for (const Landmark& lm : landmarks) {
    const double dx = lm.x - p.x();
    const double dy = lm.y - p.y();
    const double range = std::hypot(dx, dy);
    if (range > max_range || range < 1e-6) continue;
    const double bearing = angle_diff(std::atan2(dy, dx), p.theta());
    if (raycast(world, p, bearing, range) < range - 1e-9) continue;
    LandmarkObservation obs;
    obs.landmark_id = lm.id;
    obs.range = range + rng.gaussian(noise.landmark_range_sigma);
    obs.bearing = normalize_angle(bearing + rng.gaussian(noise.landmark_bearing_sigma));
    obs.var_range = std::max(noise.landmark_range_sigma * noise.landmark_range_sigma, 1e-6);
    obs.var_bearing = std::max(noise.landmark_bearing_sigma * noise.landmark_bearing_sigma, 1e-8);
    out.push_back(obs);
  }
  return out;
}

}  // namespace locnav
