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

#include "locnav/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "locnav/error.hpp"

namespace locnav {

GridGeometry::GridGeometry(int width, int height, double resolution, Pose2D origin)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      cos_(std::cos(origin.theta())),
      sin_(std::sin(origin.theta())) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw MapError("non-positive resolution");
  }
  if (width <= 0 || height <= 0) throw MapError("grid dimensions must be positive");
}

void GridGeometry::world_to_map(double wx, double wy, double& mx, double& my) const {
  const double dx = wx - origin_.x();
  const double dy = wy - origin_.y();
  mx = cos_ * dx + sin_ * dy;
  my = -sin_ * dx + cos_ * dy;
}

void GridGeometry::map_to_world(double mx, double my, double& wx, double& wy) const {
  wx = origin_.x() + cos_ * mx - sin_ * my;
  wy = origin_.y() + sin_ * mx + cos_ * my;
}

CellIndex GridGeometry::world_to_grid_unbounded(double wx, double wy) const {
  double mx = 0.0;
  double my = 0.0;
  world_to_map(wx, wy, mx, my);
  return {static_cast<int>(std::floor(mx / resolution_)), static_cast<int>(std::floor(my / resolution_))};
}

std::optional<CellIndex> GridGeometry::world_to_grid(double wx, double wy) const {
  if (!std::isfinite(wx) || !std::isfinite(wy)) return std::nullopt;
  const CellIndex c = world_to_grid_unbounded(wx, wy);
  if (!in_bounds(c)) return std::nullopt;
  return c;
}

void GridGeometry::grid_to_world(int col, int row, double& wx, double& wy) const {
  map_to_world((col + 0.5) * resolution_, (row + 0.5) * resolution_, wx, wy);
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Pose2D origin, std::vector<Cell> cells)
    : geometry_(width, height, resolution, origin), cells_(std::move(cells)) {
  if (cells_.size() != geometry_.size()) {
    throw MapError("cell count " + std::to_string(cells_.size()) + " does not match " + std::to_string(width) +
                   "x" + std::to_string(height));
  }
}

std::vector<CellIndex> OccupancyGrid::free_cells() const {
  std::vector<CellIndex> out;
  for (int row = 0; row < height(); ++row) {
    for (int col = 0; col < width(); ++col) {
      if (at(col, row) == Cell::kFree) out.push_back({col, row});
    }
  }
  return out;
}

std::size_t OccupancyGrid::count(Cell kind) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kind));
}

OccupancyGrid OccupancyGrid::with_box(double x0, double y0, double x1, double y1, Cell kind) const {
  std::vector<Cell> cells = cells_;
  for (int row = 0; row < height(); ++row) {
    for (int col = 0; col < width(); ++col) {
      double wx = 0.0;
      double wy = 0.0;
      grid_to_world(col, row, wx, wy);
      if (wx >= std::min(x0, x1) && wx <= std::max(x0, x1) && wy >= std::min(y0, y1) && wy <= std::max(y0, y1)) {
        cells[geometry_.index(col, row)] = kind;
      }
    }
  }
  return {width(), height(), resolution(), origin(), std::move(cells)};
}

}  // namespace locnav
