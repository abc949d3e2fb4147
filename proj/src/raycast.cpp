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

#include "locnav/raycast.hpp"

#include "locnav/error.hpp"

namespace locnav {

double raycast(const OccupancyGrid& grid, const Pose2D& from, double bearing, double max_range,
               RaycastOptions options) {
  if (!grid.world_to_grid(from.x(), from.y())) throw MapError("raycast start outside map bounds");
  if (!(max_range > 0.0)) return 0.0;
  double hit = max_range;
  walk_ray(grid.geometry(), from.x(), from.y(), from.theta() + bearing, max_range,
           [&](CellIndex c, double t) {
             const Cell k = grid.at(c);
             if (k == Cell::kOccupied || (options.unknown_blocks && k == Cell::kUnknown)) {
               hit = std::min(t, max_range);
               return false;
             }
             return true;
           });
  return hit;
}

}  // namespace locnav
