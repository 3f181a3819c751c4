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
#include <vector>

#include "synthpop/common/rng.hpp"
#include "synthpop/io/grid.hpp"
#include "synthpop/io/polygon.hpp"

namespace synthpop::geo {

struct SamplerOptions {
  double oversample_factor = 1.5;  // candidates per missing point in each batch
  double acceptance_floor = 1e-3;
  // Acceptance is only judged once this many candidates have been drawn.
  std::size_t min_draws_before_floor = 10000;
};

struct SampleStats {
  std::size_t drawn = 0;
  std::size_t accepted = 0;
  std::size_t batches = 0;
};

// Two-stage sampler over the density cells whose centers lie inside the
// region: a cell is drawn with probability proportional to its count, a point
// is placed uniformly in the cell's square, and points outside the polygon
// are rejected. Immutable once built.
class DensitySampler {
 public:
  // Throws PipelineError when no cell center is inside the polygon or all
  // retained counts are zero.
  static DensitySampler build(const io::GridDensity& grid, const io::RegionPolygon& polygon,
                              const SamplerOptions& options = {});

  std::vector<LatLon> sample_points(std::size_t n, std::uint64_t seed, SampleStats* stats = nullptr) const;
  std::vector<LatLon> sample_points(std::size_t n, Rng& rng, SampleStats* stats = nullptr,
                                    std::vector<std::size_t>* source_cells = nullptr) const;

  const std::vector<io::GridCell>& cells() const { return cells_; }
  double cell_size() const { return cell_size_; }
  const io::RegionPolygon& polygon() const { return polygon_; }
  const SamplerOptions& options() const { return options_; }

 private:
  std::size_t draw_cell(Rng& rng) const;

  std::vector<io::GridCell> cells_;
  std::vector<double> cumulative_;
  double cell_size_ = 0.0;
  io::RegionPolygon polygon_;
  SamplerOptions options_;
};

}  // namespace synthpop::geo
