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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace locnav {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

/// RGB raster with row 0 at the top.
class Canvas {
 public:
  Canvas(int width, int height, Rgb fill = {255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, Rgb c);
  void line(int x0, int y0, int x1, int y1, Rgb c);
  void fill_rect(int x0, int y0, int x1, int y1, Rgb c);
  /// Digits, '.', '-' and ' ' only, in a 3x5 pixel font scaled by `scale`.
  void text(int x, int y, const std::string& s, Rgb c, int scale = 2);

  const std::vector<Rgb>& pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

void write_png(const Canvas& canvas, const std::filesystem::path& file);

struct RenderedFiles {
  std::filesystem::path trajectory;
  std::filesystem::path particles;
  std::filesystem::path error;
  std::filesystem::path index;
};

/// Reads metrics.jsonl, summary.json and the map copy from a run directory and
/// writes trajectory.png, particles.png, error.png and plots.json next to
/// them. Throws Error when an artifact is missing.
RenderedFiles render_artifacts(const std::filesystem::path& run_dir);

}  // namespace locnav
