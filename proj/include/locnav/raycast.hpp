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

#include <algorithm>
#include <cmath>
#include <limits>

#include "locnav/occupancy_grid.hpp"

namespace locnav {

/// Walks every cell a ray pierces, in order, Amanatides-Woo style.
///
/// `visit(CellIndex, double enter_distance_m)` is called for the start cell
/// (distance 0) and then for each cell entered; returning false stops the
/// walk. When the ray passes exactly through a cell corner, both cells that
/// share that corner are reported at the corner distance before the diagonal
/// cell. The walk ends at `max_range` or when the ray leaves the grid.
template <class Visit>
void walk_ray(const GridGeometry& g, double wx, double wy, double world_angle, double max_range, Visit&& visit) {
  double mx = 0.0;
  double my = 0.0;
  g.world_to_map(wx, wy, mx, my);
  const double res = g.resolution();
  const double a = world_angle - g.origin().theta();
  const double dx = std::cos(a);
  const double dy = std::sin(a);
  const double px = mx / res;
  const double py = my / res;
  int cx = static_cast<int>(std::floor(px));
  int cy = static_cast<int>(std::floor(py));
  if (!g.in_bounds(cx, cy)) return;
  if (!visit(CellIndex{cx, cy}, 0.0)) return;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTie = 1e-9;
  const int sx = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int sy = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  double t_max_x = sx > 0 ? (cx + 1 - px) / dx : (sx < 0 ? (px - cx) / -dx : kInf);
  double t_max_y = sy > 0 ? (cy + 1 - py) / dy : (sy < 0 ? (py - cy) / -dy : kInf);
  const double t_delta_x = sx != 0 ? 1.0 / std::abs(dx) : kInf;
  const double t_delta_y = sy != 0 ? 1.0 / std::abs(dy) : kInf;
  const double t_limit = max_range / res;

  for (;;) {
    double t = 0.0;
    if (std::abs(t_max_x - t_max_y) <= kTie) {
      t = std::min(t_max_x, t_max_y);
      if (t > t_limit) return;
      const CellIndex side_x{cx + sx, cy};
      const CellIndex side_y{cx, cy + sy};
      if (g.in_bounds(side_x) && !visit(side_x, t * res)) return;
      if (g.in_bounds(side_y) && !visit(side_y, t * res)) return;
      cx += sx;
      cy += sy;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      t = t_max_x;
      cx += sx;
      t_max_x += t_delta_x;
    } else {
      t = t_max_y;
      cy += sy;
      t_max_y += t_delta_y;
    }
    if (t > t_limit) return;
    if (!g.in_bounds(cx, cy)) return;
    if (!visit(CellIndex{cx, cy}, t * res)) return;
  }
}

struct RaycastOptions {
  /// Unknown cells stop the ray. Off for the simulator's ground-truth laser.
  bool unknown_blocks = false;
};

/// Distance from `from` along `from.theta() + bearing` to the boundary of the
/// first blocking cell, or `max_range` if nothing is hit inside the map.
/// Throws MapError if `from` lies outside the grid.
double raycast(const OccupancyGrid& grid, const Pose2D& from, double bearing, double max_range,
               RaycastOptions options = {});

}  // namespace locnav
