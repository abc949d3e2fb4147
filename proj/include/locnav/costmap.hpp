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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locnav/occupancy_grid.hpp"
#include "locnav/sensor_model.hpp"

namespace locnav {

namespace cost {
inline constexpr std::uint8_t kFree = 0;
inline constexpr std::uint8_t kInscribed = 253;
inline constexpr std::uint8_t kLethal = 254;
inline constexpr std::uint8_t kUnknown = 255;
}  // namespace cost

/// move_base costmap parameters.
struct CostmapConfig {
  double obstacle_range = 1.5;
  double raytrace_range = 4.0;
  double inflation_radius = 0.65;
  double robot_radius = 0.3;
  double update_frequency = 10.0;
  double publish_frequency = 10.0;
  double cost_scaling_factor = 10.0;
  double transform_tolerance = 1.25;
  /// Side length of the rolling local window (m).
  double local_window = 6.0;

  /// Throws ConfigError for non-positive values.
  void validate() const;
  /// Soft invariant violations (ordering of ranges and radii).
  std::vector<std::string> warnings() const;

  static CostmapConfig udacity_bot();
  static CostmapConfig sagar_bot();
};

struct CellBox {
  CellIndex lo;
  CellIndex hi;  // inclusive

  void expand(CellIndex c);
};

/// Byte-cost grid. Pinned cells hold static-map obstacles that sensor
/// clearing must not erase.
class Costmap {
 public:
  Costmap() = default;
  Costmap(GridGeometry geometry, std::uint8_t fill, bool rolling = false);

  /// Occupied -> LETHAL (pinned), Unknown -> UNKNOWN, Free -> FREE.
  static Costmap from_map(const OccupancyGrid& map);
  /// Rolling square window, cell-aligned to the world, centered near (cx, cy).
  static Costmap rolling_window(double size_m, double resolution, double cx, double cy);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width(); }
  int height() const { return geometry_.height(); }
  double resolution() const { return geometry_.resolution(); }
  bool rolling() const { return rolling_; }

  std::uint8_t at(int col, int row) const { return cost_[geometry_.index(col, row)]; }
  std::uint8_t at(CellIndex c) const { return at(c.col, c.row); }
  void set(int col, int row, std::uint8_t v) { cost_[geometry_.index(col, row)] = v; }
  void set(CellIndex c, std::uint8_t v) { set(c.col, c.row, v); }
  bool pinned(CellIndex c) const { return !pinned_.empty() && pinned_[geometry_.index(c)] != 0; }
  std::span<const std::uint8_t> costs() const { return cost_; }

  /// Cost at a world point; nullopt outside the grid.
  std::optional<std::uint8_t> cost_at(double wx, double wy) const;

  /// Shifts a rolling window so it is centered near (cx, cy). Cells present
  /// in both windows keep their cost; newly exposed cells are FREE.
  Costmap recentered(double cx, double cy) const;

  bool operator==(const Costmap&) const = default;

 private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> cost_;
  std::vector<std::uint8_t> pinned_;
  bool rolling_ = false;
  double window_size_ = 0.0;
};

/// Raytrace clearing then obstacle marking for one scan taken at
/// `sensor_pose`. Returns the bounding box of changed cells, if any.
std::optional<CellBox> mark_and_clear_in_place(Costmap& cm, const LaserScan& scan, const Pose2D& sensor_pose,
                                               const CostmapConfig& cfg);
Costmap mark_and_clear(const Costmap& cm, const LaserScan& scan, const Pose2D& sensor_pose,
                       const CostmapConfig& cfg);

/// Cost of a cell at distance d from the nearest lethal cell, inside the
/// inflation band: INSCRIBED within robot_radius, exponential decay beyond.
std::uint8_t inflation_cost(double d, const CostmapConfig& cfg);

/// Inflates around LETHAL cells. Existing costs are only raised; UNKNOWN cells
/// are replaced only by INSCRIBED.
Costmap inflate(const Costmap& cm, const CostmapConfig& cfg);

/// Recomputes `inflated` inside `box` from the un-inflated `layer`. Gives the
/// same cells as inflate(layer) restricted to the box.
void inflate_region(const Costmap& layer, Costmap& inflated, const CostmapConfig& cfg, const CellBox& box);

/// Writes `<stem>.pgm` (cost bytes, top row first) and `<stem>.json`.
void write_costmap_snapshot(const Costmap& cm, const CostmapConfig& cfg, const std::filesystem::path& stem);

}  // namespace locnav
