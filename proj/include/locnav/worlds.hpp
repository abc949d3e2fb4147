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

#include <filesystem>
#include <vector>

#include "locnav/occupancy_grid.hpp"
#include "locnav/sim.hpp"

namespace locnav {

/// Room-grid maze. Rooms are `room_size` squares separated by walls of
/// `wall` thickness; an opening is a gap of `opening` meters centered on the
/// shared wall.
struct MazeLayout {
  struct Opening {
    int col = 0;
    int row = 0;
    /// East neighbour if true, north neighbour otherwise.
    bool east = true;
  };
  struct Pillar {
    double x = 0.0;
    double y = 0.0;
    double half = 0.15;
  };

  int cols = 5;
  int rows = 5;
  double room_size = 4.0;
  double wall = 0.2;
  double opening = 1.8;
  double resolution = 0.05;
  /// World position of the maze's south-west corner.
  double x0 = -10.0;
  double y0 = -10.0;
  std::vector<Opening> openings;
  std::vector<Pillar> pillars;

  double room_center_x(int col) const { return x0 + (col + 0.5) * room_size; }
  double room_center_y(int row) const { return y0 + (row + 0.5) * room_size; }
};

OccupancyGrid build_maze(const MazeLayout& layout);

/// The 5x5 fixture maze. The start room is at the center (world origin) and
/// the goal room at the north-east corner. The shortest route leaves the
/// start room northwards; `blocked` closes the opening that route depends on.
MazeLayout fixture_maze_layout(bool blocked);
OccupancyGrid fixture_maze(bool blocked);
std::vector<Landmark> fixture_maze_landmarks();

/// Straight 24 m x 2 m corridor with irregular side alcoves.
OccupancyGrid fixture_corridor();
std::vector<Landmark> fixture_corridor_landmarks();

/// Writes maze, maze_blocked and corridor map files into `dir`.
void write_fixture_maps(const std::filesystem::path& dir);

}  // namespace locnav
