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

#include "locnav/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "locnav/error.hpp"

namespace locnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared distance transform of a sampled function (lower envelope of
// parabolas rooted at the finite samples). Scratch buffers are reused.
void transform_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  v.resize(n);
  z.resize(n + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    // z[0] is -inf, so the pop loop always stops at k >= 0.
    double s = 0.0;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double diff = q - v[j];
    d[q] = diff * diff + f[v[j]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(int width, int height, std::span<const std::uint8_t> seeds) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = seeds[i] ? 0.0 : kInf;

  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> f(static_cast<std::size_t>(std::max(width, height)));
  std::vector<double> d(f.size());

  for (int col = 0; col < width; ++col) {
    for (int row = 0; row < height; ++row) f[row] = grid[static_cast<std::size_t>(row) * width + col];
    transform_1d(std::span(f).first(height), std::span(d).first(height), v, z);
    for (int row = 0; row < height; ++row) grid[static_cast<std::size_t>(row) * width + col] = d[row];
  }
  for (int row = 0; row < height; ++row) {
    auto line = std::span(grid).subspan(static_cast<std::size_t>(row) * width, width);
    std::copy(line.begin(), line.end(), f.begin());
    transform_1d(std::span(f).first(width), line, v, z);
  }
  return grid;
}

DistanceField::DistanceField(GridGeometry geometry, double max_dist, std::vector<double> dist)
    : geometry_(std::move(geometry)), max_dist_(max_dist), dist_(std::move(dist)) {}

DistanceField build_distance_field(const OccupancyGrid& grid, double max_dist) {
  if (!(max_dist > 0.0)) throw MapError("distance field max_dist must be positive");
  std::vector<std::uint8_t> seeds(grid.cells().size());
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = grid.cells()[i] == Cell::kOccupied;
  std::vector<double> sq = squared_distance_transform(grid.width(), grid.height(), seeds);
  const double res = grid.resolution();
  for (double& x : sq) x = x == kInf ? max_dist : std::min(std::sqrt(x) * res, max_dist);
  return {grid.geometry(), max_dist, std::move(sq)};
}

}  // namespace locnav
