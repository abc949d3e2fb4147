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

#include <stdexcept>
#include <string>

namespace locnav {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed map YAML/PGM, or queries outside the map.
struct MapError : Error {
  using Error::Error;
};

/// Bad scenario/run configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// A scan older than the transform tolerance was handed to the filter.
struct StaleScanError : Error {
  using Error::Error;
};

struct EkfError : Error {
  using Error::Error;
};

struct RenderError : Error {
  using Error::Error;
};

}  // namespace locnav
