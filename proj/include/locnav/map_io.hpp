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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locnav/occupancy_grid.hpp"

namespace locnav {

/// Grayscale raster, rows stored top to bottom as in the file.
struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// map_server style metadata.
struct MapMetadata {
  std::string image;
  double resolution = 0.0;
  Pose2D origin;
  double occupied_thresh = 0.65;
  double free_thresh = 0.196;
  bool negate = false;
};

/// Binary P5 only, maxval 255.
PgmImage parse_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const PgmImage& image);

MapMetadata parse_map_yaml(std::string_view yaml_text);

/// Thresholds every pixel into Free/Occupied/Unknown. The image is flipped so
/// that the bottom image row becomes grid row 0.
OccupancyGrid load_map(std::string_view yaml_text, std::span<const std::uint8_t> pgm_bytes);
OccupancyGrid load_map(const MapMetadata& meta, const PgmImage& image);

/// Reads the YAML and the image it references (relative to the YAML's directory).
OccupancyGrid load_map_file(const std::filesystem::path& yaml_path);

/// Writes `<stem>.yaml` and `<stem>.pgm` (free=254, occupied=0, unknown=205).
void write_map_files(const OccupancyGrid& grid, const std::filesystem::path& yaml_path);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace locnav
