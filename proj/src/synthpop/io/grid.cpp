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

#include "synthpop/io/grid.hpp"

#include <algorithm>
#include <cmath>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::io {

void validate_grid(const GridDensity& grid) {
  if (!(grid.cell_size > 0.0) || !std::isfinite(grid.cell_size)) throw InputError("grid cell size must be > 0");
  std::vector<LatLon> centers;
  centers.reserve(grid.cells.size());
  for (const auto& c : grid.cells) {
    if (!(c.count >= 0.0)) throw InputError("grid cell has negative or invalid count");
    centers.push_back(c.center);
  }
  std::sort(centers.begin(), centers.end(),
            [](const LatLon& a, const LatLon& b) { return a.lat != b.lat ? a.lat < b.lat : a.lon < b.lon; });
  const auto dup = std::adjacent_find(centers.begin(), centers.end());
  if (dup != centers.end()) {
    throw InputError("duplicate grid cell at (" + format_double(dup->lat) + ", " + format_double(dup->lon) + ")");
  }
}

GridDensity load_grid(const std::filesystem::path& path, double cell_size) {
  CsvReader r(path);
  const auto cx = r.require_column("X");
  const auto cy = r.require_column("Y");
  const auto cz = r.require_column("Z");
  GridDensity grid;
  grid.cell_size = cell_size;
  while (r.next()) {
    GridCell cell;
    const auto x = parse_double(r[cx]);
    const auto y = parse_double(r[cy]);
    const auto z = parse_double(r[cz]);
    if (!x) r.fail(cx, "not a number");
    if (!y) r.fail(cy, "not a number");
    if (!z) r.fail(cz, "not a number");
    if (*z < 0.0) r.fail(cz, "negative count");
    cell.center = {*x, *y};
    cell.count = *z;
    grid.cells.push_back(cell);
  }
  validate_grid(grid);
  return grid;
}

}  // namespace synthpop::io
