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

#include "locnav/map_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "locnav/error.hpp"

namespace locnav {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads one token.
  std::string token() {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) throw MapError("malformed PGM header: truncated");
    return out;
  }

  int integer(const char* what) {
    const std::string t = token();
    for (char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw MapError(std::string("malformed PGM header: bad ") + what);
      }
    }
    if (t.size() > 9) throw MapError(std::string("malformed PGM header: ") + what + " too large");
    return std::stoi(t);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw MapError("malformed PGM header: missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

YAML::Node require(const YAML::Node& root, const char* key) {
  YAML::Node n = root[key];
  if (!n) throw MapError(std::string("missing YAML key: ") + key);
  return n;
}

}  // namespace

PgmImage parse_pgm(std::span<const std::uint8_t> bytes) {
  HeaderReader header(bytes);
  const std::string magic = header.token();
  if (magic != "P5") throw MapError("malformed PGM header: expected P5, got " + magic);
  PgmImage img;
  img.width = header.integer("width");
  img.height = header.integer("height");
  const int maxval = header.integer("maxval");
  if (img.width <= 0 || img.height <= 0) throw MapError("malformed PGM header: empty image");
  if (maxval != 255) throw MapError("malformed PGM header: maxval must be 255");
  const std::size_t offset = header.raster_offset();
  const std::size_t expected = static_cast<std::size_t>(img.width) * img.height;
  const std::size_t available = offset <= bytes.size() ? bytes.size() - offset : 0;
  if (available != expected) {
    throw MapError("pixel count mismatch: header declares " + std::to_string(expected) + ", found " +
                   std::to_string(available));
  }
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  return img;
}

std::vector<std::uint8_t> encode_pgm(const PgmImage& image) {
  const std::string header =
      "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

MapMetadata parse_map_yaml(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw MapError(std::string("map YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) throw MapError("map YAML must be a mapping");
  MapMetadata meta;
  try {
    meta.image = require(root, "image").as<std::string>();
    meta.resolution = require(root, "resolution").as<double>();
    const YAML::Node origin = require(root, "origin");
    if (!origin.IsSequence() || origin.size() != 3) throw MapError("origin must be a 3-element list");
    meta.origin = Pose2D(origin[0].as<double>(), origin[1].as<double>(), origin[2].as<double>());
    meta.occupied_thresh = require(root, "occupied_thresh").as<double>();
    meta.free_thresh = require(root, "free_thresh").as<double>();
    const YAML::Node negate = require(root, "negate");
    int as_int = 0;
    if (YAML::convert<int>::decode(negate, as_int)) {
      meta.negate = as_int != 0;
    } else {
      meta.negate = negate.as<bool>();
    }
  } catch (const YAML::Exception& e) {
    throw MapError(std::string("bad map YAML value: ") + e.what());
  }
  if (!(meta.resolution > 0.0)) throw MapError("non-positive resolution");
  return meta;
}

OccupancyGrid load_map(const MapMetadata& meta, const PgmImage& image) {
  if (!(meta.resolution > 0.0)) throw MapError("non-positive resolution");
  std::vector<Cell> cells(static_cast<std::size_t>(image.width) * image.height, Cell::kUnknown);
  for (int img_row = 0; img_row < image.height; ++img_row) {
    const int row = image.height - 1 - img_row;
    for (int col = 0; col < image.width; ++col) {
      const double v = image.pixels[static_cast<std::size_t>(img_row) * image.width + col];
      const double p = meta.negate ? v / 255.0 : (255.0 - v) / 255.0;
      Cell c = Cell::kUnknown;
      if (p > meta.occupied_thresh) {
        c = Cell::kOccupied;
      } else if (p < meta.free_thresh) {
        c = Cell::kFree;
      }
      cells[static_cast<std::size_t>(row) * image.width + col] = c;
    }
  }
  return {image.width, image.height, meta.resolution, meta.origin, std::move(cells)};
}

OccupancyGrid load_map(std::string_view yaml_text, std::span<const std::uint8_t> pgm_bytes) {
  return load_map(parse_map_yaml(yaml_text), parse_pgm(pgm_bytes));
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MapError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OccupancyGrid load_map_file(const std::filesystem::path& yaml_path) {
  const MapMetadata meta = parse_map_yaml(read_text_file(yaml_path));
  std::filesystem::path image = meta.image;
  if (image.is_relative()) image = yaml_path.parent_path() / image;
  return load_map(meta, parse_pgm(read_binary_file(image)));
}

void write_map_files(const OccupancyGrid& grid, const std::filesystem::path& yaml_path) {
  PgmImage img;
  img.width = grid.width();
  img.height = grid.height();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int row = 0; row < grid.height(); ++row) {
    const int img_row = grid.height() - 1 - row;
    for (int col = 0; col < grid.width(); ++col) {
      std::uint8_t v = 205;
      if (grid.at(col, row) == Cell::kFree) v = 254;
      if (grid.at(col, row) == Cell::kOccupied) v = 0;
      img.pixels[static_cast<std::size_t>(img_row) * img.width + col] = v;
    }
  }
  std::filesystem::path pgm_path = yaml_path;
  pgm_path.replace_extension(".pgm");
  {
    const auto bytes = encode_pgm(img);
    std::ofstream out(pgm_path, std::ios::binary);
    if (!out) throw MapError("cannot write " + pgm_path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  std::ofstream out(yaml_path);
  if (!out) throw MapError("cannot write " + yaml_path.string());
  out << "image: " << pgm_path.filename().string() << "\n"
      << "resolution: " << grid.resolution() << "\n"
      << "origin: [" << grid.origin().x() << ", " << grid.origin().y() << ", " << grid.origin().theta() << "]\n"
      << "occupied_thresh: 0.65\n"
      << "free_thresh: 0.196\n"
      << "negate: 0\n";
}

}  // namespace locnav
