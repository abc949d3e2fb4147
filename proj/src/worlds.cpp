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

#include "locnav/worlds.hpp"

#include <cmath>

#include "locnav/map_io.hpp"

namespace locnav {

namespace {

// Fills every cell whose center lies inside the box.
void fill_box(const GridGeometry& g, std::vector<Cell>& cells, double x0, double y0, double x1, double y1) {
  for (int row = 0; row < g.height(); ++row) {
    for (int col = 0; col < g.width(); ++col) {
      double wx = 0.0;
      double wy = 0.0;
      g.grid_to_world(col, row, wx, wy);
      if (wx >= x0 && wx <= x1 && wy >= y0 && wy <= y1) cells[g.index(col, row)] = Cell::kOccupied;
    }
  }
}

bool has_opening(const MazeLayout& m, int col, int row, bool east) {
  for (const auto& o : m.openings) {
    if (o.col == col && o.row == row && o.east == east) return true;
  }
  return false;
}

}  // namespace

OccupancyGrid build_maze(const MazeLayout& m) {
  const double w = m.cols * m.room_size;
  const double h = m.rows * m.room_size;
  // Half a wall of margin outside the outer walls keeps them inside the grid.
  const double margin = m.wall;
  const int width = static_cast<int>(std::lround((w + 2 * margin) / m.resolution));
  const int height = static_cast<int>(std::lround((h + 2 * margin) / m.resolution));
  const Pose2D origin(m.x0 - margin, m.y0 - margin, 0.0);
  const GridGeometry g(width, height, m.resolution, origin);
  std::vector<Cell> cells(g.size(), Cell::kFree);
  const double t = 0.5 * m.wall;

  // Outer walls.
  fill_box(g, cells, m.x0 - t, m.y0 - t, m.x0 + w + t, m.y0 + t);
  fill_box(g, cells, m.x0 - t, m.y0 + h - t, m.x0 + w + t, m.y0 + h + t);
  fill_box(g, cells, m.x0 - t, m.y0 - t, m.x0 + t, m.y0 + h + t);
  fill_box(g, cells, m.x0 + w - t, m.y0 - t, m.x0 + w + t, m.y0 + h + t);

  const double gap = 0.5 * m.opening;
  for (int row = 0; row < m.rows; ++row) {
    for (int col = 0; col < m.cols; ++col) {
      const double cx = m.room_center_x(col);
      const double cy = m.room_center_y(row);
      const double half = 0.5 * m.room_size;
      if (col + 1 < m.cols) {
        const double x = cx + half;
        if (has_opening(m, col, row, true)) {
          fill_box(g, cells, x - t, cy - half - t, x + t, cy - gap);
          fill_box(g, cells, x - t, cy + gap, x + t, cy + half + t);
        } else {
          fill_box(g, cells, x - t, cy - half - t, x + t, cy + half + t);
        }
      }
      if (row + 1 < m.rows) {
        const double y = cy + half;
        if (has_opening(m, col, row, false)) {
          fill_box(g, cells, cx - half - t, y - t, cx - gap, y + t);
          fill_box(g, cells, cx + gap, y - t, cx + half + t, y + t);
        } else {
          fill_box(g, cells, cx - half - t, y - t, cx + half + t, y + t);
        }
      }
    }
  }
  for (const auto& p : m.pillars) fill_box(g, cells, p.x - p.half, p.y - p.half, p.x + p.half, p.y + p.half);
  return OccupancyGrid(width, height, m.resolution, origin, std::move(cells));
}

MazeLayout fixture_maze_layout(bool blocked) {
  MazeLayout m;
  const std::vector<std::pair<int, int>> east = {{0, 0}, {1, 0}, {3, 0}, {0, 1}, {2, 1}, {3, 1}, {0, 2},
                                                 {1, 2}, {0, 3}, {3, 3}, {0, 4}, {1, 4}, {3, 4}};
  const std::vector<std::pair<int, int>> north = {{0, 0}, {2, 0}, {4, 0}, {1, 1}, {2, 1}, {3, 1}, {4, 1},
                                                  {0, 2}, {2, 2}, {4, 2}, {1, 3}, {3, 3}, {4, 3}};
  for (auto [c, r] : east) m.openings.push_back({c, r, true});
  for (auto [c, r] : north) m.openings.push_back({c, r, false});
  // The opening out of the room north of the start, toward the goal side.
  if (!blocked) m.openings.push_back({2, 3, true});

  // Corner pillars. No two rooms share the same openings-and-pillars pattern
  // under any quarter turn, so a scan can tell rooms apart.
  struct Corner {
    int col, row;
    double dx, dy;
  };
  const Corner corners[] = {
      {0, 0, 1, 1},   {0, 1, 1, 1},  {0, 2, -1, -1}, {0, 3, -1, -1}, {0, 4, 1, 1},   {1, 0, 1, 1},   {1, 1, 1, 1},
      {1, 1, -1, 1},  {1, 2, 1, 1},  {1, 3, 1, 1},   {1, 3, -1, -1}, {1, 4, -1, 1},  {2, 0, 1, 1},   {2, 0, 1, -1},
      {2, 1, 1, 1},   {2, 2, -1, 1}, {2, 3, 1, 1},   {2, 3, -1, 1},  {2, 4, 1, 1},   {3, 0, -1, 1},  {3, 1, 1, 1},
      {3, 1, -1, 1},  {3, 2, -1, -1}, {3, 3, 1, 1},  {3, 3, -1, -1}, {3, 4, 1, 1},   {3, 4, 1, -1},  {4, 0, -1, 1},
      {4, 0, 1, -1},  {4, 1, 1, 1},  {4, 1, -1, 1},  {4, 2, 1, 1},   {4, 3, 1, 1},   {4, 3, -1, -1}, {4, 4, 1, 1},
      {4, 4, -1, 1},  {4, 4, -1, -1}};
  for (const Corner& c : corners) {
    const double off = 0.5 * m.room_size - 0.6;
    m.pillars.push_back({m.room_center_x(c.col) + c.dx * off, m.room_center_y(c.row) + c.dy * off, 0.4});
  }
  return m;
}

OccupancyGrid fixture_maze(bool blocked) { return build_maze(fixture_maze_layout(blocked)); }

std::vector<Landmark> fixture_maze_landmarks() {
  const MazeLayout m = fixture_maze_layout(false);
  std::vector<Landmark> out;
  int id = 0;
  for (int row = 0; row < m.rows; ++row) {
    for (int col = 0; col < m.cols; ++col) {
      const double sx = (col + row) % 2 == 0 ? 1.0 : -1.0;
      out.push_back({id++, m.room_center_x(col) + sx * 1.2, m.room_center_y(row) - 1.2});
    }
  }
  return out;
}

OccupancyGrid fixture_corridor() {
  const double res = 0.05;
  const int width = static_cast<int>(std::lround(25.0 / res));
  const int height = static_cast<int>(std::lround(4.0 / res));
  const Pose2D origin(-0.5, -2.0, 0.0);
  const GridGeometry g(width, height, res, origin);
  std::vector<Cell> cells(g.size(), Cell::kFree);
  // Walls at y = +-1 and the two end caps.
  fill_box(g, cells, -0.3, 1.0, 24.3, 1.3);
  fill_box(g, cells, -0.3, -1.3, 24.3, -1.0);
  fill_box(g, cells, -0.3, -1.3, 0.0, 1.3);
  fill_box(g, cells, 24.0, -1.3, 24.3, 1.3);
  // Alcoves cut into the walls, at irregular spacing.
  const double north[][2] = {{2.0, 3.1}, {7.4, 8.0}, {12.5, 14.0}, {19.0, 19.6}};
  const double south[][2] = {{4.3, 5.5}, {10.0, 10.5}, {16.2, 17.9}, {21.5, 22.4}};
  std::vector<Cell> carved = cells;
  for (const auto& a : north) {
    for (int row = 0; row < g.height(); ++row) {
      for (int col = 0; col < g.width(); ++col) {
        double wx = 0.0;
        double wy = 0.0;
        g.grid_to_world(col, row, wx, wy);
        if (wx >= a[0] && wx <= a[1] && wy >= 1.0 && wy < 1.15) carved[g.index(col, row)] = Cell::kFree;
      }
    }
  }
  for (const auto& a : south) {
    for (int row = 0; row < g.height(); ++row) {
      for (int col = 0; col < g.width(); ++col) {
        double wx = 0.0;
        double wy = 0.0;
        g.grid_to_world(col, row, wx, wy);
        if (wx >= a[0] && wx <= a[1] && wy <= -1.0 && wy > -1.15) carved[g.index(col, row)] = Cell::kFree;
      }
    }
  }
  return OccupancyGrid(width, height, res, origin, std::move(carved));
}

std::vector<Landmark> fixture_corridor_landmarks() {
  std::vector<Landmark> out;
  for (int i = 0; i < 8; ++i) out.push_back({i, 1.5 + 3.0 * i, i % 2 == 0 ? 0.8 : -0.8});
  return out;
}

void write_fixture_maps(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_map_files(fixture_maze(false), dir / "maze.yaml");
  write_map_files(fixture_maze(true), dir / "maze_blocked.yaml");
  write_map_files(fixture_corridor(), dir / "corridor.yaml");
}

}  // namespace locnav
