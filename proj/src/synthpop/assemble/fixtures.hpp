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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace synthpop::assemble {

// Desk-scale input set. Households come in pairs that are identical except
// for every member's sex, and both members of a pair share one "true" weight;
// the marginals are those weights applied to the microdata, scaled so the
// person total equals target_total. IPU therefore has an exact solution.
struct FixtureOptions {
  std::size_t base_households = 200;  // the file holds twice as many
  double target_total = 100000.0;
  std::size_t grid_side = 12;  // grid_side x grid_side cells
};

struct FixtureSummary {
  std::size_t households = 0;
  std::size_t persons = 0;
  std::size_t grid_cells = 0;
  std::vector<double> true_weights;  // per household, file order
  double scale = 0.0;                // marginal = scale * weighted count
};

inline constexpr double kFixtureCellSize = 30.0 / 3600.0;
inline constexpr double kFixtureOriginLat = 19.0;
inline constexpr double kFixtureOriginLon = 72.85;

// Writes individuals.csv, households.csv, marginals.csv, grid.csv,
// region.geojson, admin_units.csv and the configs common.cfg, generate.cfg,
// evaluate.cfg, simulate.cfg. A fixed internal seed makes the bytes
// reproducible.
FixtureSummary write_fixtures(const std::filesystem::path& out_dir, const FixtureOptions& options = {});

}  // namespace synthpop::assemble
