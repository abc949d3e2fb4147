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

#include <cstdint>
#include <span>
#include <vector>

#include "locnav/occupancy_grid.hpp"

namespace locnav {

/// Exact squared Euclidean distance transform over cell centers, in cells^2.
/// Seeds are cells with a non-zero mask value; with no seeds every entry is
/// +infinity. Separable lower-envelope algorithm: columns, then rows.
std::vector<double> squared_distance_transform(int width, int height, std::span<const std::uint8_t> seeds);

/// Distance (meters) from every cell center to the nearest Occupied cell
/// center, saturated at max_dist. Immutable; read from any thread.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(GridGeometry geometry, double max_dist, std::vector<double> dist);

  const GridGeometry& geometry() const { return geometry_; }
  double max_dist() const { return max_dist_; }
  double at(int col, int row) const { return dist_[geometry_.index(col, row)]; }
  std::span<const double> values() const { return dist_; }

  /// Distance at the cell containing a world point; max_dist outside the map.
  double lookup(double wx, double wy) const {
    const CellIndex c = geometry_.world_to_grid_unbounded(wx, wy);
    if (!geometry_.in_bounds(c)) return max_dist_;
    return dist_[geometry_.index(c)];
  }

 private:
  GridGeometry geometry_;
  double max_dist_ = 0.0;
  std::vector<double> dist_;
};

/// Throws MapError when max_dist <= 0.
DistanceField build_distance_field(const OccupancyGrid& grid, double max_dist);

}  // namespace locnav
