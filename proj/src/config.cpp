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

#include "locnav/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <set>

#include "locnav/error.hpp"
#include "locnav/map_io.hpp"
#include "locnav/worlds.hpp"

namespace locnav {

Estimator parse_estimator(const std::string& s) {
  if (s == "amcl") return Estimator::kAmcl;
  if (s == "ekf") return Estimator::kEkf;
  if (s == "both") return Estimator::kBoth;
  throw ConfigError("estimator must be amcl, ekf or both, got: " + s);
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::kAmcl: return "amcl";
    case Estimator::kEkf: return "ekf";
    case Estimator::kBoth: return "both";
  }
  return "unknown";
}

DriveMode parse_drive_mode(const std::string& s) {
  if (s == "nav") return DriveMode::kNav;
  if (s == "teleop") return DriveMode::kTeleop;
  throw ConfigError("drive must be nav or teleop, got: " + s);
}

std::string to_string(DriveMode d) { return d == DriveMode::kNav ? "nav" : "teleop"; }

namespace {

// Reads keys from a mapping and rejects any it was not asked about.
class Section {
 public:
  Section(const YAML::Node& node, std::string name) : node_(node), name_(std::move(name)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(name_ + " must be a mapping");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("bad value for " + name_ + "." + key);
    }
  }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() ? node_[key] : YAML::Node();
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError("unknown key " + name_ + "." + key);
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
  std::set<std::string> seen_;
};

Pose2D parse_pose(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 3) throw ConfigError(what + " must be [x, y, theta]");
  try {
    return {n[0].as<double>(), n[1].as<double>(), n[2].as<double>()};
  } catch (const YAML::Exception&) {
    throw ConfigError(what + " must be numeric");
  }
}

void parse_amcl(Section s, AmclConfig& a, bool& global) {
  s.get("min_particles", a.min_particles);
  s.get("max_particles", a.max_particles);
  s.get("transform_tolerance", a.transform_tolerance);
  double ix = a.initial_pose.x();
  double iy = a.initial_pose.y();
  double ia = a.initial_pose.theta();
  s.get("initial_pose_x", ix);
  s.get("initial_pose_y", iy);
  s.get("initial_pose_a", ia);
  a.initial_pose = Pose2D(ix, iy, ia);
  s.get("initial_cov_xx", a.initial_cov[0]);
  s.get("initial_cov_yy", a.initial_cov[1]);
  s.get("initial_cov_aa", a.initial_cov[2]);
  s.get("laser_z_hit", a.sensor.z_hit);
  s.get("laser_z_short", a.sensor.z_short);
  s.get("laser_z_max", a.sensor.z_max);
  s.get("laser_z_rand", a.sensor.z_rand);
  s.get("laser_sigma_hit", a.sensor.sigma_hit);
  s.get("laser_lambda_short", a.sensor.lambda_short);
  s.get("laser_likelihood_max_dist", a.sensor.likelihood_max_dist);
  s.get("laser_max_beams", a.sensor.max_beams);
  if (s.has("laser_model_type")) {
    std::string t;
    s.get("laser_model_type", t);
    try {
      a.sensor.model_type = parse_laser_model_type(t);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (s.has("odom_model_type")) {
    std::string t;
    s.get("odom_model_type", t);
    if (t != "diff-corrected" && t != "diff") throw ConfigError("odom_model_type must be diff-corrected or diff");
  }
  std::string frame;
  s.get("odom_frame_id", frame);
  s.get("odom_alpha1", a.motion_noise.alpha1);
  s.get("odom_alpha2", a.motion_noise.alpha2);
  s.get("odom_alpha3", a.motion_noise.alpha3);
  s.get("odom_alpha4", a.motion_noise.alpha4);
  s.get("kld_err", a.kld_err);
  s.get("kld_z", a.kld_z);
  s.get("resample_interval", a.resample_interval);
  s.get("convergence_threshold", a.convergence_threshold);
  s.get("workers", a.workers);
  s.get("global_localization", global);
  if (s.has("resampler_type")) {
    std::string t;
    s.get("resampler_type", t);
    if (t == "systematic") {
      a.resampler = ResamplerType::kSystematic;
    } else if (t == "multinomial") {
      a.resampler = ResamplerType::kMultinomial;
    } else {
      throw ConfigError("resampler_type must be systematic or multinomial");
    }
  }
  Section r(s.child("recovery"), "amcl.recovery");
  r.get("global_reinit", a.recovery.global_reinit);
  r.get("inlier_distance", a.recovery.inlier_distance);
  r.get("lost_inliers", a.recovery.lost_inliers);
  r.get("lost_patience", a.recovery.lost_patience);
  r.get("search_patience", a.recovery.search_patience);
  r.get("search_timeout", a.recovery.search_timeout);
  r.get("accept_inliers", a.recovery.accept_inliers);
  r.get("accept_patience", a.recovery.accept_patience);
  r.get("keep_fraction", a.recovery.keep_fraction);
  r.get("candidates_per_particle", a.recovery.candidates_per_particle);
  r.finish();
  s.finish();
}

void parse_move_base(Section s, CostmapConfig& c, GoalTolerance& tol) {
  s.get("yaw_goal_tolerance", tol.yaw);
  s.get("xy_goal_tolerance", tol.xy);
  s.get("obstacle_range", c.obstacle_range);
  s.get("raytrace_range", c.raytrace_range);
  s.get("inflation_radius", c.inflation_radius);
  s.get("robot_radius", c.robot_radius);
  s.get("update_frequency", c.update_frequency);
  s.get("publish_frequency", c.publish_frequency);
  s.get("cost_scaling_factor", c.cost_scaling_factor);
  s.get("transform_tolerance", c.transform_tolerance);
  s.get("local_window", c.local_window);
  s.finish();
}

std::vector<Landmark> parse_landmarks(const YAML::Node& n) {
  if (!n || n.IsNull()) return fixture_maze_landmarks();
  if (n.IsScalar()) {
    const auto name = n.as<std::string>();
    if (name == "maze") return fixture_maze_landmarks();
    if (name == "corridor") return fixture_corridor_landmarks();
    throw ConfigError("unknown landmark set: " + name);
  }
  if (!n.IsSequence()) throw ConfigError("ekf.landmarks must be a name or a list of [x, y]");
  std::vector<Landmark> out;
  int id = 0;
  for (const auto& item : n) {
    if (!item.IsSequence() || item.size() != 2) throw ConfigError("landmark must be [x, y]");
    out.push_back({id++, item[0].as<double>(), item[1].as<double>()});
  }
  return out;
}

ScenarioEvent parse_event(const YAML::Node& n) {
  Section s(n, "events[]");
  ScenarioEvent e;
  s.get("time", e.time);
  std::string type;
  s.get("type", type);
  if (type == "goal") {
    e.kind = EventKind::kSetGoal;
    if (!s.has("pose")) throw ConfigError("goal event needs a pose");
    e.pose = parse_pose(s.child("pose"), "goal pose");
  } else if (type == "kidnap") {
    e.kind = EventKind::kKidnap;
    if (!s.has("pose")) throw ConfigError("kidnap event needs a pose");
    e.pose = parse_pose(s.child("pose"), "kidnap pose");
  } else if (type == "teleop") {
    e.kind = EventKind::kTeleop;
    s.get("v", e.v);
    s.get("omega", e.omega);
    s.get("duration", e.duration);
    if (e.duration < 0) throw ConfigError("teleop duration must be >= 0");
  } else {
    throw ConfigError("event type must be goal, kidnap or teleop, got: " + type);
  }
  s.finish();
  return e;
}

}  // namespace

void RunConfig::validate() const {
  amcl.validate();
  costmap.validate();
  tolerance.validate();
  controller.validate();
  robot.validate();
  if (!(duration > 0)) throw ConfigError("duration must be > 0");
  if (!(control_rate > 0) || !(scan_rate > 0)) throw ConfigError("rates must be > 0");
  if (scan_rate > control_rate) throw ConfigError("scan rate cannot exceed the control rate");
  if (!(replan_period >= 0)) throw ConfigError("replan_period must be >= 0");
  if (!sim_noise.odometry.valid()) throw ConfigError("sim_noise odom alphas must be >= 0");
  if (sim_noise.laser_sigma < 0) throw ConfigError("laser_sigma must be >= 0");
  if (estimator != Estimator::kAmcl && ekf.landmarks.empty()) throw ConfigError("EKF needs landmarks");
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time < events[i - 1].time) throw ConfigError("event times must be non-decreasing");
  }
}

RunConfig parse_run_config(std::string_view yaml_text, const std::filesystem::path& base_dir,
                           const std::optional<std::string>& robot_override) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("scenario must be a mapping");
  Section top(root, "scenario");
  RunConfig c;

  std::string map;
  top.get("map", map);
  if (map.empty()) throw ConfigError("missing key: map");
  c.map_path = base_dir / map;
  std::string world;
  top.get("world", world);
  c.world_path = world.empty() ? c.map_path : base_dir / world;

  top.get("robot", c.robot_name);
  if (robot_override) c.robot_name = *robot_override;
  c.robot = RobotConfig::preset(c.robot_name);
  top.get("robot_speed_scale", c.robot.speed_scale);
  c.costmap = c.robot.costmap;
  c.amcl.laser_offset = c.robot.laser_mount;

  if (!top.has("seed")) throw ConfigError("missing key: seed (seeds are always explicit)");
  top.get("seed", c.seed);
  top.get("duration", c.duration);
  std::string est = to_string(c.estimator);
  top.get("estimator", est);
  c.estimator = parse_estimator(est);
  std::string drive = to_string(c.drive);
  top.get("drive", drive);
  c.drive = parse_drive_mode(drive);
  top.get("output_dir", c.output_dir);
  top.get("snapshot_period", c.snapshot_period);

  if (top.has("start")) c.start = parse_pose(top.child("start"), "start");

  Section rates(top.child("rates"), "rates");
  rates.get("control", c.control_rate);
  rates.get("scan", c.scan_rate);
  rates.finish();

  // Belief defaults to the start pose unless the amcl section says otherwise.
  c.amcl.initial_pose = c.start;
  parse_amcl(Section(top.child("amcl"), "amcl"), c.amcl, c.global_localization);
  c.amcl.laser_offset = c.robot.laser_mount;

  parse_move_base(Section(top.child("move_base"), "move_base"), c.costmap, c.tolerance);
  c.robot.costmap = c.costmap;

  Section ctl(top.child("controller"), "controller");
  ctl.get("lookahead", c.controller.lookahead);
  ctl.get("max_vel_x", c.controller.limits.v);
  ctl.get("max_vel_theta", c.controller.limits.omega);
  ctl.get("rotate_threshold", c.controller.rotate_threshold);
  ctl.get("lost_path_distance", c.controller.lost_path_distance);
  ctl.get("replan_period", c.replan_period);
  ctl.get("no_path_timeout", c.no_path_timeout);
  ctl.finish();
  c.controller.limits.v *= c.robot.speed_scale;
  c.controller.limits.omega *= c.robot.speed_scale;

  Section metrics(top.child("metrics"), "metrics");
  metrics.get("lost_timeout", c.lost_timeout);
  metrics.get("recovery_window", c.recovery_window);
  metrics.get("recovery_error", c.recovery_error);
  metrics.get("recovery_hold", c.recovery_hold);
  metrics.get("converge_error", c.converge_error);
  metrics.finish();

  Section noise(top.child("sim_noise"), "sim_noise");
  noise.get("odom_alpha1", c.sim_noise.odometry.alpha1);
  noise.get("odom_alpha2", c.sim_noise.odometry.alpha2);
  noise.get("odom_alpha3", c.sim_noise.odometry.alpha3);
  noise.get("odom_alpha4", c.sim_noise.odometry.alpha4);
  noise.get("laser_sigma", c.sim_noise.laser_sigma);
  noise.get("landmark_range_sigma", c.sim_noise.landmark_range_sigma);
  noise.get("landmark_bearing_sigma", c.sim_noise.landmark_bearing_sigma);
  noise.finish();

  Section ekf(top.child("ekf"), "ekf");
  c.ekf.landmarks = parse_landmarks(ekf.child("landmarks"));
  ekf.get("landmark_max_range", c.ekf.landmark_max_range);
  ekf.get("gate", c.ekf.gate);
  ekf.get("lost_patience", c.ekf.lost_patience);
  c.ekf.motion_noise = c.amcl.motion_noise;
  ekf.finish();

  const YAML::Node events = top.child("events");
  if (events && !events.IsNull()) {
    if (!events.IsSequence()) throw ConfigError("events must be a list");
    for (const auto& e : events) c.events.push_back(parse_event(e));
  }
  top.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::optional<std::string>& robot_override) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  RunConfig c = parse_run_config(text, path.parent_path(), robot_override);
  c.config_path = path;
  for (const auto& p : {c.map_path, c.world_path}) {
    if (!std::filesystem::exists(p)) throw ConfigError("map file not found: " + p.string());
  }
  return c;
}

std::filesystem::path resolve_output_dir(const std::string& output_dir) {
  const std::filesystem::path p(output_dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("LOCNAV_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
    return std::filesystem::path(root) / p;
  }
  return p;
}

}  // namespace locnav
