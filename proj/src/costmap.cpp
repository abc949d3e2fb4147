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

#include "locnav/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "locnav/distance_field.hpp"
#include "locnav/error.hpp"
#include "locnav/map_io.hpp"
#include "locnav/raycast.hpp"

namespace locnav {

void CostmapConfig::validate() const {
  if (!(obstacle_range > 0) || !(raytrace_range > 0)) throw ConfigError("obstacle/raytrace range must be > 0");
  if (!(inflation_radius > 0) || !(robot_radius > 0)) throw ConfigError("inflation/robot radius must be > 0");
  if (!(update_frequency > 0) || !(publish_frequency > 0)) throw ConfigError("frequencies must be > 0");
  if (cost_scaling_factor < 0) throw ConfigError("cost_scaling_factor must be >= 0");
  if (!(local_window > 0)) throw ConfigError("local_window must be > 0");
}

std::vector<std::string> CostmapConfig::warnings() const {
  std::vector<std::string> w;
  if (raytrace_range < obstacle_range) w.emplace_back("raytrace_range < obstacle_range");
  if (inflation_radius < robot_radius) w.emplace_back("inflation_radius < robot_radius");
  return w;
}

CostmapConfig CostmapConfig::udacity_bot() { return {}; }

CostmapConfig CostmapConfig::sagar_bot() {
  CostmapConfig c;
  c.obstacle_range = 5.0;
  c.raytrace_range = 8.0;
  c.inflation_radius = 0.55;
  c.robot_radius = 0.4;
  return c;
}

void CellBox::expand(CellIndex c) {
  lo.col = std::min(lo.col, c.col);
  lo.row = std::min(lo.row, c.row);
  hi.col = std::max(hi.col, c.col);
  hi.row = std::max(hi.row, c.row);
}

Costmap::Costmap(GridGeometry geometry, std::uint8_t fill, bool rolling)
    : geometry_(std::move(geometry)), cost_(geometry_.size(), fill), rolling_(rolling) {}

Costmap Costmap::from_map(const OccupancyGrid& map) {
  Costmap cm(map.geometry(), cost::kFree);
  cm.pinned_.assign(cm.cost_.size(), 0);
  for (std::size_t i = 0; i < cm.cost_.size(); ++i) {
    switch (map.cells()[i]) {
      case Cell::kOccupied:
        cm.cost_[i] = cost::kLethal;
        cm.pinned_[i] = 1;
        break;
      case Cell::kUnknown:
        cm.cost_[i] = cost::kUnknown;
        break;
      case Cell::kFree:
        break;
    }
  }
  return cm;
}

Costmap Costmap::rolling_window(double size_m, double resolution, double cx, double cy) {
  const int n = std::max(1, static_cast<int>(std::lround(size_m / resolution)));
  const double ox = std::floor((cx - 0.5 * size_m) / resolution) * resolution;
  const double oy = std::floor((cy - 0.5 * size_m) / resolution) * resolution;
  Costmap cm(GridGeometry(n, n, resolution, Pose2D(ox, oy, 0.0)), cost::kFree, true);
  cm.window_size_ = size_m;
  return cm;
}

std::optional<std::uint8_t> Costmap::cost_at(double wx, double wy) const {
  const auto c = geometry_.world_to_grid(wx, wy);
  if (!c) return std::nullopt;
  return at(*c);
}

Costmap Costmap::recentered(double cx, double cy) const {
  const double res = resolution();
  const double size = window_size_ > 0 ? window_size_ : width() * res;
  const double target_x = std::floor((cx - 0.5 * size) / res) * res;
  const double target_y = std::floor((cy - 0.5 * size) / res) * res;
  // Integer shift keeps the new window exactly aligned with the old cells.
  const long shift_x = std::lround((target_x - geometry_.origin().x()) / res);
  const long shift_y = std::lround((target_y - geometry_.origin().y()) / res);
  Costmap out(GridGeometry(width(), height(), res,
                           Pose2D(geometry_.origin().x() + shift_x * res, geometry_.origin().y() + shift_y * res, 0.0)),
              cost::kFree, rolling_);
  out.window_size_ = window_size_;
  for (int row = 0; row < height(); ++row) {
    for (int col = 0; col < width(); ++col) {
      const long src_col = col + shift_x;
      const long src_row = row + shift_y;
      if (src_col < 0 || src_row < 0 || src_col >= width() || src_row >= height()) continue;
      out.set(col, row, at(static_cast<int>(src_col), static_cast<int>(src_row)));
    }
  }
  return out;
}

std::optional<CellBox> mark_and_clear_in_place(Costmap& cm, const LaserScan& scan, const Pose2D& sensor_pose,
                                               const CostmapConfig& cfg) {
  std::optional<CellBox> changed;
  auto note = [&](CellIndex c) {
    if (!changed) {
      changed = CellBox{c, c};
    } else {
      changed->expand(c);
    }
  };
  const GridGeometry& g = cm.geometry();
  const std::size_t n = std::min(scan.ranges.size(), scan.bearings.size());

  for (std::size_t i = 0; i < n; ++i) {
    const double a = sensor_pose.theta() + scan.bearings[i];
    const double len = std::min(scan.ranges[i], cfg.raytrace_range);
    const CellIndex end = g.world_to_grid_unbounded(sensor_pose.x() + len * std::cos(a),
                                                    sensor_pose.y() + len * std::sin(a));
    walk_ray(g, sensor_pose.x(), sensor_pose.y(), a, len, [&](CellIndex c, double) {
      if (c == end) return false;
      if (!cm.pinned(c) && cm.at(c) != cost::kFree) {
        cm.set(c, cost::kFree);
        note(c);
      }
      return true;
    });
  }
  // Marking after clearing: an endpoint always wins over a ray through it.
  const double mark_limit = std::min(scan.range_max, cfg.obstacle_range);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = scan.ranges[i];
    if (!(r < mark_limit)) continue;
    const double a = sensor_pose.theta() + scan.bearings[i];
    const auto c = g.world_to_grid(sensor_pose.x() + r * std::cos(a), sensor_pose.y() + r * std::sin(a));
    if (c && cm.at(*c) != cost::kLethal) {
      cm.set(*c, cost::kLethal);
      note(*c);
    }
  }
  return changed;
}

Costmap mark_and_clear(const Costmap& cm, const LaserScan& scan, const Pose2D& sensor_pose,
                       const CostmapConfig& cfg) {
  Costmap out = cm;
  mark_and_clear_in_place(out, scan, sensor_pose, cfg);
  return out;
}

std::uint8_t inflation_cost(double d, const CostmapConfig& cfg) {
  if (d <= cfg.robot_radius) return cost::kInscribed;
  if (d > cfg.inflation_radius) return cost::kFree;
  const double c = 252.0 * std::exp(-cfg.cost_scaling_factor * (d - cfg.robot_radius));
  return static_cast<std::uint8_t>(std::lround(c));
}

namespace {

std::uint8_t combine(std::uint8_t old_cost, double d, const CostmapConfig& cfg) {
  if (old_cost == cost::kLethal || d > cfg.inflation_radius) return old_cost;
  const std::uint8_t c = inflation_cost(d, cfg);
  if (old_cost == cost::kUnknown) return c >= cost::kInscribed ? c : old_cost;
  return std::max(old_cost, c);
}

}  // namespace

Costmap inflate(const Costmap& cm, const CostmapConfig& cfg) {
  Costmap out = cm;
  if (cm.width() == 0) return out;
  inflate_region(cm, out, cfg, CellBox{{0, 0}, {cm.width() - 1, cm.height() - 1}});
  return out;
}

void inflate_region(const Costmap& layer, Costmap& inflated, const CostmapConfig& cfg, const CellBox& box) {
  const int pad = static_cast<int>(std::ceil(cfg.inflation_radius / layer.resolution())) + 1;
  const int c0 = std::max(0, box.lo.col - pad);
  const int r0 = std::max(0, box.lo.row - pad);
  const int c1 = std::min(layer.width() - 1, box.hi.col + pad);
  const int r1 = std::min(layer.height() - 1, box.hi.row + pad);
  if (c0 > c1 || r0 > r1) return;
  const int w = c1 - c0 + 1;
  const int h = r1 - r0 + 1;
  std::vector<std::uint8_t> seeds(static_cast<std::size_t>(w) * h);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      seeds[static_cast<std::size_t>(row) * w + col] = layer.at(c0 + col, r0 + row) == cost::kLethal;
    }
  }
  const std::vector<double> sq = squared_distance_transform(w, h, seeds);
  const double res = layer.resolution();
  const int bc0 = std::max(0, box.lo.col);
  const int br0 = std::max(0, box.lo.row);
  const int bc1 = std::min(layer.width() - 1, box.hi.col);
  const int br1 = std::min(layer.height() - 1, box.hi.row);
  for (int row = br0; row <= br1; ++row) {
    for (int col = bc0; col <= bc1; ++col) {
      const double s = sq[static_cast<std::size_t>(row - r0) * w + (col - c0)];
      const double d = std::isfinite(s) ? std::sqrt(s) * res : std::numeric_limits<double>::infinity();
      inflated.set(col, row, combine(layer.at(col, row), d, cfg));
    }
  }
}

void write_costmap_snapshot(const Costmap& cm, const CostmapConfig& cfg, const std::filesystem::path& stem) {
  PgmImage img;
  img.width = cm.width();
  img.height = cm.height();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int row = 0; row < cm.height(); ++row) {
    for (int col = 0; col < cm.width(); ++col) {
      img.pixels[static_cast<std::size_t>(cm.height() - 1 - row) * img.width + col] = cm.at(col, row);
    }
  }
  std::filesystem::path pgm = stem;
  pgm += ".pgm";
  std::filesystem::path json = stem;
  json += ".json";
  const auto bytes = encode_pgm(img);
  std::ofstream out(pgm, std::ios::binary);
  if (!out) throw Error("cannot write " + pgm.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));

  nlohmann::ordered_json j;
  j["image"] = pgm.filename().string();
  j["width"] = cm.width();
  j["height"] = cm.height();
  j["resolution"] = cm.resolution();
  j["origin"] = {cm.geometry().origin().x(), cm.geometry().origin().y(), cm.geometry().origin().theta()};
  j["rolling"] = cm.rolling();
  j["levels"] = {{"free", cost::kFree}, {"inscribed", cost::kInscribed}, {"lethal", cost::kLethal},
                 {"unknown", cost::kUnknown}};
  j["config"] = {{"obstacle_range", cfg.obstacle_range},
                 {"raytrace_range", cfg.raytrace_range},
                 {"inflation_radius", cfg.inflation_radius},
                 {"robot_radius", cfg.robot_radius},
                 {"update_frequency", cfg.update_frequency},
                 {"publish_frequency", cfg.publish_frequency},
                 {"cost_scaling_factor", cfg.cost_scaling_factor}};
  std::ofstream js(json);
  if (!js) throw Error("cannot write " + json.string());
  js << j.dump(2) << "\n";
}

}  // namespace locnav
