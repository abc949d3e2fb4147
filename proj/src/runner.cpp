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

#include "locnav/runner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <thread>

#include "locnav/costmap.hpp"
#include "locnav/ekf.hpp"
#include "locnav/error.hpp"
#include "locnav/localizer.hpp"
#include "locnav/map_io.hpp"
#include "locnav/nav.hpp"

namespace locnav {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

Json pose_json(const Pose2D& p) { return Json::array({p.x(), p.y(), p.theta()}); }

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

/// Error statistics and kidnap recovery bookkeeping for one estimator,
/// sampled at publish ticks.
class Tracker {
 public:
  explicit Tracker(std::string name) { report_.name = std::move(name); }

  void observe(double t, double err, bool converged, const RunConfig& cfg, const std::optional<double>& kidnap_t) {
    sum_ += err;
    sum_sq_ += err * err;
    ++n_;
    report_.max_error = std::max(report_.max_error, err);
    report_.final_error = err;
    if (!report_.time_to_converge && converged && err < cfg.converge_error) report_.time_to_converge = t;

    if (!kidnap_t) return;
    if (!report_.recovered) report_.recovered = false;
    if (*report_.recovered || t < *kidnap_t) return;
    if (converged && err < cfg.recovery_error) {
      if (!run_start_) run_start_ = t;
      if (*run_start_ <= *kidnap_t + cfg.recovery_window + 1e-9 && t - *run_start_ >= cfg.recovery_hold - 1e-9) {
        report_.recovered = true;
        report_.recovery_time = *run_start_ - *kidnap_t;
      }
    } else {
      run_start_.reset();
    }
  }

  EstimatorReport finish(bool lost_at_end) {
    if (n_ > 0) {
      report_.mean_error = sum_ / static_cast<double>(n_);
      report_.rmse = std::sqrt(sum_sq_ / static_cast<double>(n_));
    }
    report_.lost_at_end = lost_at_end;
    return report_;
  }

 private:
  EstimatorReport report_;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t n_ = 0;
  std::optional<double> run_start_;
};

double ekf_spread(const GaussianBelief& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b.covariance.topLeftCorner<2, 2>());
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

std::size_t nearest_waypoint(const Path& path, const Pose2D& p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const double d = p.distance_to(path.waypoints[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Json report_json(const EstimatorReport& r) {
  Json j;
  j["name"] = r.name;
  j["mean_error_m"] = r.mean_error;
  j["max_error_m"] = r.max_error;
  j["final_error_m"] = r.final_error;
  j["rmse_m"] = r.rmse;
  j["time_to_converge_s"] = opt_json(r.time_to_converge);
  j["recovered"] = opt_json(r.recovered);
  j["recovery_time_s"] = opt_json(r.recovery_time);
  j["lost_at_end"] = r.lost_at_end;
  return j;
}

void write_json(const fs::path& file, const Json& j) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

void write_particles(const fs::path& file, const Belief& belief) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out.precision(9);
  out << "x,y,theta,weight\n";
  for (const Particle& p : belief.particles) {
    out << p.pose.x() << ',' << p.pose.y() << ',' << p.pose.theta() << ',' << p.weight << '\n';
  }
}

}  // namespace

RunSummary run_scenario(const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  fs::create_directories(out_dir / "paths");
  const OccupancyGrid known = load_map_file(cfg.map_path);
  const OccupancyGrid world = cfg.world_path == cfg.map_path ? known : load_map_file(cfg.world_path);
  const RobotConfig& robot = cfg.robot;
  const CostmapConfig& ccfg = cfg.costmap;
  const bool use_amcl = cfg.estimator != Estimator::kEkf;
  const bool use_ekf = cfg.estimator != Estimator::kAmcl;

  std::optional<Localizer> loc;
  if (use_amcl) {
    loc.emplace(cfg.amcl, known, cfg.seed);
    if (cfg.global_localization) loc->init_global();
  }
  GaussianBelief ekf = GaussianBelief::from_pose(
      cfg.amcl.initial_pose, Eigen::Vector3d(cfg.amcl.initial_cov[0], cfg.amcl.initial_cov[1], cfg.amcl.initial_cov[2])
                                 .asDiagonal());
  int ekf_bad = 0;
  std::optional<double> ekf_lost_since;

  Costmap global_layer = Costmap::from_map(known);
  Costmap global = inflate(global_layer, ccfg);
  Costmap local_layer = Costmap::rolling_window(ccfg.local_window, known.resolution(), cfg.start.x(), cfg.start.y());
  Costmap local = inflate(local_layer, ccfg);
  const int inflate_pad = static_cast<int>(std::ceil(ccfg.inflation_radius / known.resolution())) + 1;

  const double dt = 1.0 / cfg.control_rate;
  auto every = [&](double hz) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(cfg.control_rate / hz)));
  };
  const std::uint64_t scan_every = every(cfg.scan_rate);
  const std::uint64_t cost_every = every(ccfg.update_frequency);
  const std::uint64_t pub_every = every(ccfg.publish_frequency);
  const std::uint64_t snap_every =
      cfg.snapshot_period > 0 ? std::max<std::uint64_t>(1, std::llround(cfg.snapshot_period * cfg.control_rate)) : 0;
  const std::uint64_t total_ticks = static_cast<std::uint64_t>(std::llround(cfg.duration * cfg.control_rate));

  std::ofstream metrics(out_dir / "metrics.jsonl");
  std::ofstream traj(out_dir / "trajectory.csv");
  if (!metrics || !traj) throw Error("cannot write run artifacts in " + out_dir.string());
  traj.precision(9);
  traj << "t,true_x,true_y,true_theta,est_x,est_y,est_theta,odom_x,odom_y,odom_theta,v,omega\n";

  RunSummary summary;
  Tracker amcl_track("amcl");
  Tracker ekf_track("ekf");
  std::vector<std::size_t> converged_counts;
  summary.particles_min = std::numeric_limits<std::size_t>::max();

  SimState st = make_sim_state(cfg.start, cfg.seed, cfg.events);
  Pose2D odom_at_update = st.odom_pose;
  std::uint64_t scan_idx = 0;
  std::optional<LaserScan> last_scan;

  Path path;
  bool have_path = false;
  bool lost_path = false;
  double last_plan_t = -std::numeric_limits<double>::infinity();
  std::optional<Pose2D> active_goal;
  double no_path_since = std::numeric_limits<double>::quiet_NaN();  // NaN while a path exists
  bool reached = false;
  bool no_path_abort = false;
  int plan_count = 0;
  double max_y = cfg.start.y();
  double scan_inliers = 1.0;

  for (std::uint64_t tick = 0; tick <= total_ticks; ++tick) {
    const double t = st.clock;
    for (const ScenarioEvent& e : st.fired) {
      if (e.kind == EventKind::kKidnap && !summary.kidnap_time) summary.kidnap_time = e.time;
    }

    // Sensing and filtering.
    if (tick % scan_every == 0) {
      StreamRng laser_rng(cfg.seed, StreamDomain::kSimLaser, 0, scan_idx);
      LaserScan scan = simulate_scan(st, world, robot, cfg.sim_noise.laser_sigma, laser_rng);
      const OdometryReading u{odom_at_update, st.odom_pose};
      odom_at_update = st.odom_pose;
      if (loc) {
        scan_inliers = loc->update(u, scan, t).inliers;
        const std::size_t n = loc->belief().size();
        summary.particles_min = std::min(summary.particles_min, n);
        summary.particles_max = std::max(summary.particles_max, n);
      }
      if (use_ekf) {
        ekf = ekf_predict(ekf, u, cfg.ekf.motion_noise);
        StreamRng lm_rng(cfg.seed, StreamDomain::kSimLandmark, 0, scan_idx);
        const auto obs = simulate_landmarks(st, cfg.ekf.landmarks, cfg.ekf.landmark_max_range, cfg.sim_noise, world,
                                            lm_rng);
        int accepted = 0;
        for (const LandmarkObservation& o : obs) {
          const Landmark& lm = cfg.ekf.landmarks[static_cast<std::size_t>(o.landmark_id)];
          const Eigen::Vector2d pos(lm.x, lm.y);
          try {
            if (innovation_distance(ekf, o, pos) > cfg.ekf.gate) continue;
            ekf = ekf_update(ekf, o, pos);
            ++accepted;
          } catch (const EkfError&) {
          }
        }
        if (!obs.empty()) ekf_bad = accepted == 0 ? ekf_bad + 1 : 0;
        if (ekf_bad >= cfg.ekf.lost_patience) {
          if (!ekf_lost_since) ekf_lost_since = t;
        } else if (accepted > 0) {
          ekf_lost_since.reset();
        }
      }
      last_scan = std::move(scan);
      ++scan_idx;
    }

    std::optional<PoseEstimate> amcl_est;
    if (loc) amcl_est = loc->estimate();
    const bool ekf_converged = ekf_spread(ekf) < cfg.amcl.convergence_threshold;
    // Between filter updates the estimate is carried forward by odometry.
    const Pose2D odom_delta = odom_at_update.between(st.odom_pose);
    const Pose2D primary = (amcl_est ? amcl_est->mean : ekf.pose()).compose(odom_delta);
    const bool primary_converged = amcl_est ? amcl_est->converged : ekf_converged;
    const bool primary_lost = loc ? (loc->lost() || loc->searching()) : ekf_lost_since.has_value();

    // Costmaps, fed only while the pose estimate is trusted.
    if (tick % cost_every == 0 && last_scan && !primary_lost) {
      const Pose2D sensor = primary.compose(robot.laser_mount);
      if (auto box = mark_and_clear_in_place(global_layer, *last_scan, sensor, ccfg)) {
        box->lo.col -= inflate_pad;
        box->lo.row -= inflate_pad;
        box->hi.col += inflate_pad;
        box->hi.row += inflate_pad;
        inflate_region(global_layer, global, ccfg, *box);
      }
      local_layer = local_layer.recentered(primary.x(), primary.y());
      mark_and_clear_in_place(local_layer, *last_scan, sensor, ccfg);
      local = inflate(local_layer, ccfg);
    }

    // Command selection.
    ControlOutput cmd;
    std::string nav_status = "idle";
    if (st.goal && (!active_goal || !(*active_goal == *st.goal))) {
      active_goal = st.goal;
      have_path = false;
      reached = false;
    }
    if (cfg.drive == DriveMode::kTeleop) {
      nav_status = "teleop";
      if (st.teleop && t < st.teleop->until - 1e-9) {
        cmd.v = st.teleop->v;
        cmd.omega = st.teleop->omega;
      }
    } else if (active_goal && !reached) {
      if (primary_lost) {
        nav_status = "searching";
        cmd.omega = 0.5 * cfg.controller.limits.omega;
        have_path = false;
      } else {
        std::string reason;
        if (!have_path) {
          if (lost_path) {
            reason = "lost_path";
          } else if (!std::isnan(no_path_since)) {
            if (t - last_plan_t >= 1.0 - 1e-9) reason = "retry";
          } else {
            reason = plan_count == 0 ? "initial" : "resume";
          }
        } else if (first_blocked(global, path, nearest_waypoint(path, primary))) {
          reason = "blocked";
        } else if (cfg.replan_period > 0 && t - last_plan_t >= cfg.replan_period - 1e-9) {
          reason = "periodic";
        }
        if (!reason.empty()) {
          ++plan_count;
          last_plan_t = t;
          lost_path = false;
          const GridGeometry& geo = global.geometry();
          PlanResult r;
          const auto start_cell = geo.world_to_grid(primary.x(), primary.y());
          const auto goal_cell = geo.world_to_grid(active_goal->x(), active_goal->y());
          if (!start_cell) {
            r.status = PlanStatus::kStartBlocked;
          } else if (!goal_cell) {
            r.status = PlanStatus::kGoalBlocked;
          } else {
            CellIndex s = *start_cell;
            if (!traversable(global.at(s))) {
              if (auto alt = nearest_traversable(global, s, 20)) s = *alt;
            }
            r = plan_cells(global, s, *goal_cell);
            if (r.ok()) {
              attach_waypoints(geo, r.path, active_goal->theta());
              // The goal lies inside the last cell; steer to it rather than the cell center.
              r.path.waypoints.back() = *active_goal;
            }
          }
          ReplanRecord rec{t, reason, primary, to_string(r.status), r.ok() ? r.path.cost : 0.0};
          summary.replans.push_back(rec);
          if (reason == "blocked" && !summary.blocked_replan_time) {
            summary.blocked_replan_time = t;
            summary.north_progress_before_block = max_y - cfg.start.y();
          }
          if (r.ok()) {
            path = std::move(r.path);
            have_path = true;
            no_path_since = std::numeric_limits<double>::quiet_NaN();
            char name[32];
            std::snprintf(name, sizeof(name), "path_%03d.csv", plan_count);
            write_path_csv(path, out_dir / "paths" / name);
          } else {
            have_path = false;
            if (std::isnan(no_path_since)) no_path_since = t;
          }
        }
        if (have_path) {
          cmd = control_step(primary, path, cfg.tolerance, cfg.controller);
          nav_status = to_string(cmd.status);
          if (cmd.status == ControlStatus::kLostPath) {
            have_path = false;
            lost_path = true;
          } else if (cmd.status == ControlStatus::kReached) {
            reached = true;
            summary.time_to_goal = t;
          }
        } else {
          nav_status = "no_path";
          if (!std::isnan(no_path_since) && t - no_path_since > cfg.no_path_timeout) no_path_abort = true;
        }
      }
    } else if (reached) {
      nav_status = "reached";
    }

    // Publishing.
    if (tick % pub_every == 0) {
      const Pose2D& truth = st.true_pose;
      const double err = primary.distance_to(truth);
      const double herr = std::abs(angle_diff(primary.theta(), truth.theta()));
      Json m;
      m["t"] = t;
      m["est_pose"] = pose_json(primary);
      m["true_pose"] = pose_json(truth);
      m["position_error"] = err;
      m["heading_error"] = herr;
      m["n_particles"] = loc ? loc->belief().size() : 0;
      m["converged"] = primary_converged;
      m["status"] = nav_status;
      m["localizer"] = primary_lost ? (loc && loc->searching() ? "searching" : "lost") : "tracking";
      if (loc) {
        m["scan_inliers"] = scan_inliers;
        amcl_track.observe(t, err, primary_converged, cfg, summary.kidnap_time);
        if (summary.time_to_converge) converged_counts.push_back(loc->belief().size());
      }
      if (use_ekf) {
        const double e_err = ekf.pose().distance_to(truth);
        ekf_track.observe(t, e_err, ekf_converged, cfg, summary.kidnap_time);
        if (loc) {
          m["ekf"] = {{"est_pose", pose_json(ekf.pose())},
                      {"position_error", e_err},
                      {"heading_error", std::abs(angle_diff(ekf.pose().theta(), truth.theta()))},
                      {"converged", ekf_converged}};
        }
      }
      if (!summary.time_to_converge && primary_converged && err < cfg.converge_error) summary.time_to_converge = t;
      metrics << m.dump() << '\n';
      traj << t << ',' << truth.x() << ',' << truth.y() << ',' << truth.theta() << ',' << primary.x() << ','
           << primary.y() << ',' << primary.theta() << ',' << st.odom_pose.x() << ',' << st.odom_pose.y() << ','
           << st.odom_pose.theta() << ',' << cmd.v << ',' << cmd.omega << '\n';
    }
    if (snap_every > 0 && tick % snap_every == 0) {
      char name[48];
      std::snprintf(name, sizeof(name), "global_%07.1f", t);
      fs::create_directories(out_dir / "costmaps");
      write_costmap_snapshot(global, ccfg, out_dir / "costmaps" / name);
      std::snprintf(name, sizeof(name), "local_%07.1f", t);
      write_costmap_snapshot(local, ccfg, out_dir / "costmaps" / name);
    }

    summary.sim_time = t;
    summary.final_error = primary.distance_to(st.true_pose);
    summary.final_heading_error = std::abs(angle_diff(primary.theta(), st.true_pose.theta()));
    if (reached || no_path_abort || tick == total_ticks) break;
    st = sim_step(st, cmd.v, cmd.omega, dt, world, robot, cfg.sim_noise);
    max_y = std::max(max_y, st.true_pose.y());
  }

  // Outcome.
  const double end_t = summary.sim_time;
  std::optional<double> lost_since = loc ? loc->lost_since() : ekf_lost_since;
  const bool primary_lost_now = loc ? (loc->lost() || loc->searching()) : ekf_lost_since.has_value();
  summary.goal = active_goal;
  if (summary.goal) {
    summary.goal_distance = st.true_pose.distance_to(*summary.goal);
    summary.goal_heading_error = std::abs(angle_diff(st.true_pose.theta(), summary.goal->theta()));
  }
  summary.success = reached;
  if (no_path_abort) {
    summary.exit_code = kExitNoPath;
    summary.exit_reason = "no path for longer than " + std::to_string(cfg.no_path_timeout) + " s";
  } else if (reached) {
    summary.exit_code = kExitSuccess;
    summary.exit_reason = "goal reached";
  } else if (primary_lost_now && lost_since && end_t - *lost_since >= cfg.lost_timeout) {
    summary.exit_code = kExitDiverged;
    summary.exit_reason = "estimate diverged without recovery";
  } else if (active_goal) {
    summary.exit_code = kExitGoalNotReached;
    summary.exit_reason = "goal not reached within duration";
  } else {
    summary.exit_code = kExitSuccess;
    summary.exit_reason = "completed";
  }
  if (summary.particles_min == std::numeric_limits<std::size_t>::max()) summary.particles_min = 0;
  if (!converged_counts.empty()) {
    std::vector<std::size_t> v = converged_counts;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double med = static_cast<double>(v[mid]);
    if (v.size() % 2 == 0) {
      const auto lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
      med = 0.5 * (med + static_cast<double>(lower));
    }
    summary.particles_median_converged = med;
  }
  if (loc) summary.estimators.push_back(amcl_track.finish(loc->lost() || loc->searching()));
  if (use_ekf) summary.estimators.push_back(ekf_track.finish(ekf_lost_since.has_value()));

  // Artifacts.
  write_map_files(known, out_dir / "map.yaml");
  if (cfg.world_path != cfg.map_path) write_map_files(world, out_dir / "world.yaml");
  write_costmap_snapshot(global, ccfg, out_dir / "global_costmap");
  write_costmap_snapshot(local, ccfg, out_dir / "local_costmap");
  if (have_path) write_path_csv(path, out_dir / "path.csv");
  if (loc) write_particles(out_dir / "particles.csv", loc->belief());

  Json s;
  s["scenario"] = cfg.config_path.filename().string();
  s["seed"] = cfg.seed;
  s["robot"] = cfg.robot_name;
  s["estimator"] = to_string(cfg.estimator);
  s["drive"] = to_string(cfg.drive);
  s["exit_code"] = summary.exit_code;
  s["exit_reason"] = summary.exit_reason;
  s["success"] = summary.success;
  s["time_to_converge_s"] = opt_json(summary.time_to_converge);
  s["time_to_goal_s"] = opt_json(summary.time_to_goal);
  s["final_error_m"] = summary.final_error;
  s["final_heading_error_rad"] = summary.final_heading_error;
  s["sim_time_s"] = summary.sim_time;
  s["goal"] = summary.goal ? pose_json(*summary.goal) : Json(nullptr);
  s["true_goal_distance_m"] = opt_json(summary.goal_distance);
  s["true_goal_heading_error_rad"] = opt_json(summary.goal_heading_error);
  s["map"] = "map.yaml";
  s["world"] = cfg.world_path != cfg.map_path ? Json("world.yaml") : Json("map.yaml");
  Json replans = Json::array();
  for (const ReplanRecord& r : summary.replans) {
    replans.push_back({{"t", r.t}, {"reason", r.reason}, {"from", pose_json(r.from)}, {"result", r.result},
                       {"cost", r.cost}});
  }
  s["replans"] = replans;
  s["detour"] = {{"blocked_replan_t", opt_json(summary.blocked_replan_time)},
                 {"north_progress_before_block_m", summary.north_progress_before_block}};
  s["kidnap_t"] = opt_json(summary.kidnap_time);
  s["particles"] = {{"min", summary.particles_min},
                    {"max", summary.particles_max},
                    {"median_post_convergence", opt_json(summary.particles_median_converged)}};
  Json ests = Json::array();
  for (const auto& r : summary.estimators) ests.push_back(report_json(r));
  s["estimators"] = ests;
  write_json(out_dir / "summary.json", s);

  if (use_amcl && use_ekf) {
    Json c;
    c["scenario"] = s["scenario"];
    c["seed"] = cfg.seed;
    c["kidnap_t"] = opt_json(summary.kidnap_time);
    c["estimators"] = ests;
    write_json(out_dir / "compare.json", c);
  }
  return summary;
}

RunSummary compare_estimators(RunConfig cfg, const fs::path& out_dir) {
  cfg.estimator = Estimator::kBoth;
  return run_scenario(cfg, out_dir);
}

std::vector<BatchResult> run_batch(const RunConfig& cfg, std::uint64_t first, std::uint64_t last,
                                   const fs::path& out_dir, int jobs) {
  if (last < first) throw ConfigError("seed range is empty");
  const std::size_t n = static_cast<std::size_t>(last - first + 1);
  std::vector<BatchResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      RunConfig c = cfg;
      c.seed = first + i;
      results[i].seed = c.seed;
      try {
        results[i].summary = run_scenario(c, out_dir / ("seed_" + std::to_string(c.seed)));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int count = std::clamp(jobs, 1, static_cast<int>(n));
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Json b;
  b["scenario"] = cfg.config_path.filename().string();
  Json runs = Json::array();
  int successes = 0;
  for (const BatchResult& r : results) {
    if (r.summary.success) ++successes;
    runs.push_back({{"seed", r.seed},
                    {"exit_code", r.summary.exit_code},
                    {"success", r.summary.success},
                    {"time_to_converge_s", opt_json(r.summary.time_to_converge)},
                    {"time_to_goal_s", opt_json(r.summary.time_to_goal)},
                    {"final_error_m", r.summary.final_error}});
  }
  b["runs"] = runs;
  b["successes"] = successes;
  b["total"] = n;
  write_json(out_dir / "batch.json", b);
  return results;
}

}  // namespace locnav
