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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace locnav {

/// Independent random streams are identified by what consumes them.
enum class StreamDomain : std::uint64_t {
  kMotion = 1,
  kResample = 2,
  kGlobalInit = 3,
  kPoseInit = 4,
  kSimOdometry = 5,
  kSimLaser = 6,
  kSimLandmark = 7,
  kMaze = 8,
  kTest = 99,
};

/// Counter-based generator. The stream is a pure function of
/// (seed, domain, index, step), so a particle's draws do not depend on how
/// particles are split across workers or on draw order elsewhere.
///
/// Gaussians come from our own Box-Muller transform rather than
/// std::normal_distribution, whose output differs between standard libraries.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, StreamDomain domain, std::uint64_t index, std::uint64_t step)
      : key_(mix(mix(mix(mix(seed) ^ static_cast<std::uint64_t>(domain)) ^ index) ^ step)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal; consumes exactly two uniforms.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double sigma) { return sigma * gaussian(); }

  std::uint64_t draws() const { return counter_; }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace locnav
