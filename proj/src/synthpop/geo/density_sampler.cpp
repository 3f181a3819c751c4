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

#include "synthpop/geo/density_sampler.hpp"

#include <algorithm>
#include <cmath>

#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::geo {

DensitySampler DensitySampler::build(const io::GridDensity& grid, const io::RegionPolygon& polygon,
                                     const SamplerOptions& options) {
  if (!(options.oversample_factor > 1.0)) throw InputError("oversample factor must be > 1");
  if (!(options.acceptance_floor > 0.0 && options.acceptance_floor < 1.0)) {
    throw InputError("acceptance floor must be in (0, 1)");
  }
  io::validate_grid(grid);
  if (polygon.empty()) throw PipelineError("region polygon is empty");

  DensitySampler s;
  s.cell_size_ = grid.cell_size;
  s.polygon_ = polygon;
  s.options_ = options;
  double total = 0.0;
  for (const auto& c : grid.cells) {
    if (!polygon.contains(c.center)) continue;
    s.cells_.push_back(c);
    total += c.count;
    s.cumulative_.push_back(total);
  }
  if (s.cells_.empty()) throw PipelineError("no grid cell center lies inside the region polygon");
  if (!(total > 0.0)) throw PipelineError("all grid cells inside the region have zero population");
  return s;
}

std::size_t DensitySampler::draw_cell(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::vector<LatLon> DensitySampler::sample_points(std::size_t n, std::uint64_t seed, SampleStats* stats) const {
  Rng rng(seed);
  return sample_points(n, rng, stats);
}

std::vector<LatLon> DensitySampler::sample_points(std::size_t n, Rng& rng, SampleStats* stats,
                                                  std::vector<std::size_t>* source_cells) const {
  std::vector<LatLon> out;
  out.reserve(n);
  if (source_cells) source_cells->clear();
  SampleStats st;
  const double half = 0.5 * cell_size_;
  while (out.size() < n) {
    const std::size_t deficit = n - out.size();
    const auto k = static_cast<std::size_t>(std::ceil(options_.oversample_factor * static_cast<double>(deficit)));
    ++st.batches;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t c = draw_cell(rng);
      const LatLon center = cells_[c].center;
      const LatLon p{center.lat + uniform(rng, -half, half), center.lon + uniform(rng, -half, half)};
      ++st.drawn;
      if (!polygon_.contains(p)) continue;
      ++st.accepted;
      // Candidates beyond the deficit are drawn but discarded, so each batch
      // keeps the first accepted points in draw order.
      if (out.size() < n) {
        out.push_back(p);
        if (source_cells) source_cells->push_back(c);
      }
    }
    if (st.drawn >= options_.min_draws_before_floor &&
        static_cast<double>(st.accepted) < options_.acceptance_floor * static_cast<double>(st.drawn)) {
      throw PipelineError("point acceptance rate " +
                          format_double(static_cast<double>(st.accepted) / static_cast<double>(st.drawn)) +
                          " below floor " + format_double(options_.acceptance_floor) +
                          " (grid and region polygon barely overlap)");
    }
  }
  if (stats) *stats = st;
  return out;
}

}  // namespace synthpop::geo
