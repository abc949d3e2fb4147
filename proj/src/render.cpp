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

#include "locnav/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "locnav/error.hpp"
#include "locnav/map_io.hpp"

namespace locnav {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

Canvas::Canvas(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) throw RenderError("canvas must be non-empty");
}

void Canvas::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  pixels_[static_cast<std::size_t>(y) * width_ + x] = c;
}

void Canvas::line(int x0, int y0, int x1, int y1, Rgb c) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void Canvas::fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
  for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y) {
    for (int x = std::min(x0, x1); x <= std::max(x0, x1); ++x) set(x, y, c);
  }
}

namespace {

// 3x5 glyphs, one row per 3-bit group, top row first.
int glyph(char ch) {
  switch (ch) {
    case '0': return 0b111'101'101'101'111;
    case '1': return 0b010'110'010'010'111;
    case '2': return 0b111'001'111'100'111;
    case '3': return 0b111'001'111'001'111;
    case '4': return 0b101'101'111'001'001;
    case '5': return 0b111'100'111'001'111;
    case '6': return 0b111'100'111'101'111;
    case '7': return 0b111'001'001'001'001;
    case '8': return 0b111'101'111'101'111;
    case '9': return 0b111'101'111'001'111;
    case '.': return 0b000'000'000'000'010;
    case '-': return 0b000'000'111'000'000;
    default: return 0;
  }
}

}  // namespace

void Canvas::text(int x, int y, const std::string& s, Rgb c, int scale) {
  for (char ch : s) {
    const int g = glyph(ch);
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 3; ++col) {
        if (g & (1 << ((4 - row) * 3 + (2 - col)))) {
          fill_rect(x + col * scale, y + row * scale, x + col * scale + scale - 1, y + row * scale + scale - 1, c);
        }
      }
    }
    x += 4 * scale;
  }
}

void write_png(const Canvas& canvas, const fs::path& file) {
  FILE* fp = std::fopen(file.string().c_str(), "wb");
  if (fp == nullptr) throw RenderError("cannot write " + file.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw RenderError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw RenderError("libpng failed writing " + file.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(canvas.width()), static_cast<png_uint_32>(canvas.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(canvas.width()) * 3);
  for (int y = 0; y < canvas.height(); ++y) {
    for (int x = 0; x < canvas.width(); ++x) {
      const Rgb c = canvas.at(x, y);
      row[static_cast<std::size_t>(x) * 3] = c.r;
      row[static_cast<std::size_t>(x) * 3 + 1] = c.g;
      row[static_cast<std::size_t>(x) * 3 + 2] = c.b;
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

namespace {

struct Sample {
  double t = 0.0;
  double est_x = 0.0, est_y = 0.0;
  double true_x = 0.0, true_y = 0.0;
  double error = 0.0;
  double particles = 0.0;
  bool has_ekf = false;
  double ekf_error = 0.0;
};

std::vector<Sample> read_metrics(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw RenderError("missing " + file.string());
  std::vector<Sample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    Sample s;
    s.t = j.at("t").get<double>();
    s.est_x = j.at("est_pose")[0].get<double>();
    s.est_y = j.at("est_pose")[1].get<double>();
    s.true_x = j.at("true_pose")[0].get<double>();
    s.true_y = j.at("true_pose")[1].get<double>();
    s.error = j.at("position_error").get<double>();
    s.particles = j.at("n_particles").get<double>();
    if (j.contains("ekf")) {
      s.has_ekf = true;
      s.ekf_error = j["ekf"].at("position_error").get<double>();
    }
    out.push_back(s);
  }
  if (out.empty()) throw RenderError("empty " + file.string());
  return out;
}

std::vector<std::array<double, 3>> read_xy_csv(const fs::path& file) {
  std::vector<std::array<double, 3>> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::array<double, 3> v{};
    std::istringstream ss(line);
    char comma = 0;
    ss >> v[0] >> comma >> v[1] >> comma >> v[2];
    if (ss) out.push_back(v);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  Rgb color;
};

/// Line chart. Returns the y range actually used for the axis.
std::array<double, 2> plot(const fs::path& file, const std::vector<Series>& series, double y_lo, double y_hi) {
  constexpr int kW = 800;
  constexpr int kH = 400;
  constexpr int kLeft = 60;
  constexpr int kBottom = 30;
  constexpr int kTop = 15;
  constexpr int kRight = 15;
  Canvas c(kW, kH);
  double x_lo = series.front().x.front();
  double x_hi = series.front().x.back();
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  const double span = y_hi > y_lo ? y_hi - y_lo : 1.0;
  auto px = [&](double x) { return kLeft + static_cast<int>(std::lround((x - x_lo) / (x_hi - x_lo) * (kW - kLeft - kRight))); };
  auto py = [&](double y) {
    return kH - kBottom - static_cast<int>(std::lround((y - y_lo) / span * (kH - kBottom - kTop)));
  };
  const Rgb axis{0, 0, 0};
  const Rgb grid{225, 225, 225};
  for (int i = 1; i < 4; ++i) {
    const int gy = py(y_lo + span * i / 4.0);
    c.line(kLeft, gy, kW - kRight, gy, grid);
  }
  c.line(kLeft, kTop, kLeft, kH - kBottom, axis);
  c.line(kLeft, kH - kBottom, kW - kRight, kH - kBottom, axis);
  c.text(4, py(y_hi) - 4, fmt(y_hi), axis);
  c.text(4, py(y_lo) - 8, fmt(y_lo), axis);
  c.text(kLeft, kH - kBottom + 8, fmt(x_lo), axis);
  c.text(kW - kRight - 60, kH - kBottom + 8, fmt(x_hi), axis);
  for (const Series& s : series) {
    for (std::size_t i = 1; i < s.x.size(); ++i) {
      c.line(px(s.x[i - 1]), py(s.y[i - 1]), px(s.x[i]), py(s.y[i]), s.color);
    }
  }
  write_png(c, file);
  return {y_lo, std::max(y_lo, y_hi)};
}

}  // namespace

RenderedFiles render_artifacts(const fs::path& run_dir) {
  if (!fs::is_directory(run_dir)) throw RenderError("not a run directory: " + run_dir.string());
  const std::vector<Sample> samples = read_metrics(run_dir / "metrics.jsonl");
  const fs::path summary_file = run_dir / "summary.json";
  if (!fs::exists(summary_file)) throw RenderError("missing " + summary_file.string());
  const Json summary = Json::parse(read_text_file(summary_file));
  const fs::path map_file = run_dir / summary.value("world", std::string("map.yaml"));
  if (!fs::exists(map_file)) throw RenderError("missing " + map_file.string());
  const OccupancyGrid map = load_map_file(map_file);

  RenderedFiles out{run_dir / "trajectory.png", run_dir / "particles.png", run_dir / "error.png",
                    run_dir / "plots.json"};

  // Trajectory over the map.
  const int scale = std::max(1, 800 / std::max(map.width(), map.height()));
  Canvas c(map.width() * scale, map.height() * scale);
  for (int row = 0; row < map.height(); ++row) {
    for (int col = 0; col < map.width(); ++col) {
      const Cell cell = map.at(col, row);
      const Rgb color = cell == Cell::kOccupied ? Rgb{0, 0, 0} : (cell == Cell::kUnknown ? Rgb{160, 160, 160} : Rgb{255, 255, 255});
      const int y0 = (map.height() - 1 - row) * scale;
      c.fill_rect(col * scale, y0, col * scale + scale - 1, y0 + scale - 1, color);
    }
  }
  const GridGeometry& g = map.geometry();
  auto to_px = [&](double wx, double wy, int& x, int& y) {
    double mx = 0.0;
    double my = 0.0;
    g.world_to_map(wx, wy, mx, my);
    x = static_cast<int>(std::floor(mx / g.resolution() * scale));
    y = c.height() - 1 - static_cast<int>(std::floor(my / g.resolution() * scale));
  };
  auto polyline = [&](const std::vector<std::array<double, 2>>& pts, Rgb color) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      int x0, y0, x1, y1;
      to_px(pts[i - 1][0], pts[i - 1][1], x0, y0);
      to_px(pts[i][0], pts[i][1], x1, y1);
      c.line(x0, y0, x1, y1, color);
    }
  };
  std::vector<std::array<double, 2>> truth, est, path;
  for (const Sample& s : samples) {
    truth.push_back({s.true_x, s.true_y});
    est.push_back({s.est_x, s.est_y});
  }
  for (const auto& p : read_xy_csv(run_dir / "path.csv")) path.push_back({p[0], p[1]});
  polyline(path, {255, 160, 0});
  polyline(truth, {0, 170, 0});
  polyline(est, {0, 60, 255});
  for (const auto& p : read_xy_csv(run_dir / "particles.csv")) {
    int x, y;
    to_px(p[0], p[1], x, y);
    c.fill_rect(x - 1, y - 1, x + 1, y + 1, {220, 0, 0});
  }
  if (summary.contains("goal") && summary["goal"].is_array()) {
    int x, y;
    to_px(summary["goal"][0].get<double>(), summary["goal"][1].get<double>(), x, y);
    c.line(x - 6, y - 6, x + 6, y + 6, {200, 0, 200});
    c.line(x - 6, y + 6, x + 6, y - 6, {200, 0, 200});
  }
  write_png(c, out.trajectory);

  // Particle count and error over time.
  Series counts{{}, {}, {200, 0, 0}};
  Series err{{}, {}, {0, 60, 255}};
  Series ekf_err{{}, {}, {0, 150, 0}};
  for (const Sample& s : samples) {
    counts.x.push_back(s.t);
    counts.y.push_back(s.particles);
    err.x.push_back(s.t);
    err.y.push_back(s.error);
    if (s.has_ekf) {
      ekf_err.x.push_back(s.t);
      ekf_err.y.push_back(s.ekf_error);
    }
  }
  const auto [c_lo, c_hi] = std::minmax_element(counts.y.begin(), counts.y.end());
  const auto count_range = plot(out.particles, {counts}, *c_lo, *c_hi);
  double e_hi = *std::max_element(err.y.begin(), err.y.end());
  if (!ekf_err.y.empty()) e_hi = std::max(e_hi, *std::max_element(ekf_err.y.begin(), ekf_err.y.end()));
  std::vector<Series> errs{err};
  if (!ekf_err.x.empty()) errs.push_back(ekf_err);
  const auto err_range = plot(out.error, errs, 0.0, e_hi);

  Json idx;
  idx["trajectory"] = {{"file", out.trajectory.filename().string()},
                       {"legend", {{"truth", "green"}, {"estimate", "blue"}, {"path", "orange"},
                                   {"particles", "red"}, {"goal", "magenta"}}}};
  idx["particles"] = {{"file", out.particles.filename().string()},
                      {"x", "t [s]"},
                      {"y", "particle count"},
                      {"x_range", {samples.front().t, samples.back().t}},
                      {"y_range", {count_range[0], count_range[1]}}};
  idx["error"] = {{"file", out.error.filename().string()},
                  {"x", "t [s]"},
                  {"y", "position error [m]"},
                  {"x_range", {samples.front().t, samples.back().t}},
                  {"y_range", {err_range[0], err_range[1]}},
                  {"series", ekf_err.x.empty() ? Json::array({"primary"}) : Json::array({"amcl", "ekf"})}};
  std::ofstream js(out.index);
  if (!js) throw RenderError("cannot write " + out.index.string());
  js << idx.dump(2) << "\n";
  return out;
}

}  // namespace locnav
