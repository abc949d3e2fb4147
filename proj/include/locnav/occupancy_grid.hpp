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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locnav/pose.hpp"

namespace locnav {

enum class Cell : std::uint8_t { kFree = 0, kOccupied = 1, kUnknown = 2 };

struct CellIndex {
  int col = 0;
  int row = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Geometry shared by every grid-shaped map: dimensions, resolution and the
/// world pose of the outer corner of cell (0, 0). Row 0 is the bottom row
/// (lowest y in the map frame).
class GridGeometry {
 public:
  GridGeometry() = default;
  GridGeometry(int width, int height, double resolution, Pose2D origin);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Pose2D& origin() const { return origin_; }
  std::size_t size() const { return static_cast<std::size_t>(width_) * height_; }

  bool in_bounds(int col, int row) const { return col >= 0 && row >= 0 && col < width_ && row < height_; }
  bool in_bounds(CellIndex c) const { return in_bounds(c.col, c.row); }
  std::size_t index(int col, int row) const { return static_cast<std::size_t>(row) * width_ + col; }
  std::size_t index(CellIndex c) const { return index(c.col, c.row); }

  /// World point -> map-frame point (meters, relative to the cell (0,0) corner).
  void world_to_map(double wx, double wy, double& mx, double& my) const;
  void map_to_world(double mx, double my, double& wx, double& wy) const;

  /// Cell containing a world point, if it lies inside the grid.
  std::optional<CellIndex> world_to_grid(double wx, double wy) const;
  /// Same as world_to_grid but without the bounds check.
  CellIndex world_to_grid_unbounded(double wx, double wy) const;
  /// World coordinates of a cell center.
  void grid_to_world(int col, int row, double& wx, double& wy) const;

  bool operator==(const GridGeometry&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Pose2D origin_;
  double cos_ = 1.0;
  double sin_ = 0.0;
};

/// Ternary occupancy map. Immutable after construction.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  /// Throws MapError when cells.size() != width * height or resolution <= 0.
  OccupancyGrid(int width, int height, double resolution, Pose2D origin, std::vector<Cell> cells);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width(); }
  int height() const { return geometry_.height(); }
  double resolution() const { return geometry_.resolution(); }
  const Pose2D& origin() const { return geometry_.origin(); }

  bool in_bounds(int col, int row) const { return geometry_.in_bounds(col, row); }
  Cell at(int col, int row) const { return cells_[geometry_.index(col, row)]; }
  Cell at(CellIndex c) const { return at(c.col, c.row); }
  std::span<const Cell> cells() const { return cells_; }

  std::optional<CellIndex> world_to_grid(double wx, double wy) const { return geometry_.world_to_grid(wx, wy); }
  void grid_to_world(int col, int row, double& wx, double& wy) const { geometry_.grid_to_world(col, row, wx, wy); }

  /// Free cells in row-major order.
  std::vector<CellIndex> free_cells() const;
  std::size_t count(Cell kind) const;

  /// Copy with cells in the closed world-space box set to `kind`.
  OccupancyGrid with_box(double x0, double y0, double x1, double y1, Cell kind) const;

 private:
  GridGeometry geometry_;
  std::vector<Cell> cells_;
};

}  // namespace locnav
