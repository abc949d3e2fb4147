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

#include "locnav/nav.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>

#include "locnav/error.hpp"

namespace locnav {

std::string to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::kOk: return "ok";
    case PlanStatus::kNoPath: return "no_path";
    case PlanStatus::kStartBlocked: return "start_blocked";
    case PlanStatus::kGoalBlocked: return "goal_blocked";
  }
  return "unknown";
}

std::string to_string(ControlStatus s) {
  switch (s) {
    case ControlStatus::kFollowing: return "following";
    case ControlStatus::kRotating: return "rotating";
    case ControlStatus::kReached: return "reached";
    case ControlStatus::kLostPath: return "lost_path";
  }
  return "unknown";
}

namespace {

struct Move {
  int dc;
  int dr;
};
constexpr Move kMoves[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

struct OpenEntry {
  double f;
  double g;
  std::size_t idx;
  // Min-heap on f, then on larger g, then on index for a fixed expansion order.
  bool operator>(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;
    return idx > o.idx;
  }
};

}  // namespace

PlanResult plan_cells(const Costmap& cm, CellIndex start, CellIndex goal) {
  const GridGeometry& geo = cm.geometry();
  PlanResult result;
  if (!geo.in_bounds(start) || !traversable(cm.at(start))) {
    result.status = PlanStatus::kStartBlocked;
    return result;
  }
  if (!geo.in_bounds(goal) || !traversable(cm.at(goal))) {
    result.status = PlanStatus::kGoalBlocked;
    return result;
  }
  const double res = cm.resolution();
  const double diag = res * std::numbers::sqrt2;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> g(geo.size(), kInf);
  std::vector<std::int64_t> parent(geo.size(), -1);
  std::vector<std::uint8_t> closed(geo.size(), 0);
  auto heuristic = [&](int col, int row) {
    return res * std::hypot(static_cast<double>(col - goal.col), static_cast<double>(row - goal.row));
  };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  const std::size_t s = geo.index(start);
  const std::size_t t = geo.index(goal);
  g[s] = 0.0;
  open.push({heuristic(start.col, start.row), 0.0, s});
  while (!open.empty()) {
    const OpenEntry e = open.top();
    open.pop();
    if (closed[e.idx]) continue;
    closed[e.idx] = 1;
    if (e.idx == t) break;
    const int col = static_cast<int>(e.idx % geo.width());
    const int row = static_cast<int>(e.idx / geo.width());
    for (const Move& m : kMoves) {
      const int nc = col + m.dc;
      const int nr = row + m.dr;
      if (!geo.in_bounds(nc, nr)) continue;
      const std::uint8_t c = cm.at(nc, nr);
      if (!traversable(c)) continue;
      const bool diagonal = m.dc != 0 && m.dr != 0;
      if (diagonal && (!traversable(cm.at(col + m.dc, row)) || !traversable(cm.at(col, row + m.dr)))) continue;
      const std::size_t ni = geo.index(nc, nr);
      if (closed[ni]) continue;
      const double ng = e.g + edge_cost(diagonal ? diag : res, c);
      if (ng < g[ni]) {
        g[ni] = ng;
        parent[ni] = static_cast<std::int64_t>(e.idx);
        open.push({ng + heuristic(nc, nr), ng, ni});
      }
    }
  }
  if (!std::isfinite(g[t])) {
    result.status = PlanStatus::kNoPath;
    return result;
  }

  std::vector<CellIndex> cells;
  for (std::int64_t i = static_cast<std::int64_t>(t); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    cells.push_back({static_cast<int>(i % geo.width()), static_cast<int>(i / geo.width())});
  }
  std::reverse(cells.begin(), cells.end());
  result.status = PlanStatus::kOk;
  result.path.cells = cells;
  result.path.cost = g[t];
  return result;
}

void attach_waypoints(const GridGeometry& geo, Path& path, double goal_heading) {
  path.waypoints.clear();
  const std::size_t n = path.cells.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) geo.grid_to_world(path.cells[i].col, path.cells[i].row, xs[i], ys[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const double heading = i + 1 < n ? std::atan2(ys[i + 1] - ys[i], xs[i + 1] - xs[i]) : goal_heading;
    path.waypoints.emplace_back(xs[i], ys[i], heading);
  }
}

PlanResult plan(const Costmap& cm, const Pose2D& start, const Pose2D& goal) {
  const GridGeometry& geo = cm.geometry();
  const auto s = geo.world_to_grid(start.x(), start.y());
  const auto t = geo.world_to_grid(goal.x(), goal.y());
  if (!s) return {PlanStatus::kStartBlocked, {}};
  if (!t) return {PlanStatus::kGoalBlocked, {}};
  PlanResult r = plan_cells(cm, *s, *t);
  if (r.ok()) attach_waypoints(geo, r.path, goal.theta());
  return r;
}

std::optional<CellIndex> nearest_traversable(const Costmap& cm, CellIndex from, int max_cells) {
  std::optional<CellIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int ring = 0; ring <= max_cells; ++ring) {
    // Every cell of ring k is at least k cells away.
    if (best && ring > best_d) break;
    for (int dr = -ring; dr <= ring; ++dr) {
      for (int dc = -ring; dc <= ring; ++dc) {
        if (std::max(std::abs(dc), std::abs(dr)) != ring) continue;
        const CellIndex c{from.col + dc, from.row + dr};
        if (!cm.geometry().in_bounds(c) || !traversable(cm.at(c))) continue;
        const double d = std::hypot(dc, dr);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
    }
  }
  return best;
}

std::optional<std::size_t> first_blocked(const Costmap& cm, const Path& path, std::size_t from) {
  for (std::size_t i = from; i < path.cells.size(); ++i) {
    const CellIndex c = path.cells[i];
    if (!cm.geometry().in_bounds(c) || !traversable(cm.at(c))) return i;
  }
  return std::nullopt;
}

void write_path_csv(const Path& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "x,y,theta\n";
  out.precision(9);
  for (const Pose2D& p : path.waypoints) out << p.x() << ',' << p.y() << ',' << p.theta() << '\n';
}

void GoalTolerance::validate() const {
  if (!(xy > 0) || !(yaw > 0)) throw ConfigError("goal tolerances must be > 0");
}

void ControllerConfig::validate() const {
  if (!(lookahead > 0)) throw ConfigError("lookahead must be > 0");
  if (!(limits.v > 0) || !(limits.omega > 0)) throw ConfigError("velocity limits must be > 0");
  if (!(lost_path_distance > 0)) throw ConfigError("lost_path_distance must be > 0");
}

ControlOutput control_step(const Pose2D& current, const Path& path, const GoalTolerance& tol,
                           const ControllerConfig& cfg) {
  if (path.empty()) throw Error("control_step on an empty path");
  const Pose2D& goal = path.waypoints.back();
  const double goal_dist = current.distance_to(goal);
  auto clamp_omega = [&](double w) { return std::clamp(w, -cfg.limits.omega, cfg.limits.omega); };

  if (goal_dist <= tol.xy) {
    const double yaw_err = angle_diff(goal.theta(), current.theta());
    if (std::abs(yaw_err) <= tol.yaw) return {0.0, 0.0, ControlStatus::kReached};
    double w = cfg.heading_gain * yaw_err;
    if (std::abs(w) < cfg.min_rotate_omega) w = std::copysign(cfg.min_rotate_omega, yaw_err);
    return {0.0, clamp_omega(w), ControlStatus::kRotating};
  }

  std::size_t nearest = 0;
  double nearest_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const double d = current.distance_to(path.waypoints[i]);
    if (d < nearest_d) {
      nearest_d = d;
      nearest = i;
    }
  }
  if (nearest_d > cfg.lost_path_distance) return {0.0, 0.0, ControlStatus::kLostPath};

  std::size_t target = path.waypoints.size() - 1;
  for (std::size_t i = nearest; i < path.waypoints.size(); ++i) {
    if (current.distance_to(path.waypoints[i]) >= cfg.lookahead) {
      target = i;
      break;
    }
  }
  const Pose2D& p = path.waypoints[target];
  const double alpha = angle_diff(std::atan2(p.y() - current.y(), p.x() - current.x()), current.theta());
  if (std::abs(alpha) > cfg.rotate_threshold) {
    return {0.0, clamp_omega(cfg.heading_gain * alpha), ControlStatus::kFollowing};
  }
  const double ld = std::max(current.distance_to(p), 1e-9);
  const double curvature = 2.0 * std::sin(alpha) / ld;
  double v = std::min(cfg.limits.v, cfg.approach_gain * goal_dist);
  double w = curvature * v;
  if (std::abs(w) > cfg.limits.omega) {
    v *= cfg.limits.omega / std::abs(w);
    w = clamp_omega(w);
  }
  return {v, w, ControlStatus::kFollowing};
}

}  // namespace locnav
