// Copyright 2026 The synthpop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <vector>

#include "synthpop/io/geometry.hpp"

namespace synthpop::io {

struct GridCell {
  LatLon center;
  double count = 0.0;  // persons living in the cell
};

struct GridDensity {
  std::vector<GridCell> cells;
  double cell_size = 0.0;  // side length, degrees
};

// 30 arc-seconds, roughly 0.93 km at the equator.
inline constexpr double kDefaultCellSize = 30.0 / 3600.0;

// Columns X (latitude), Y (longitude), Z (count).
GridDensity load_grid(const std::filesystem::path& path, double cell_size = kDefaultCellSize);

// Checks S > 0, Z >= 0 and unique centers.
void validate_grid(const GridDensity& grid);

}  // namespace synthpop::io
