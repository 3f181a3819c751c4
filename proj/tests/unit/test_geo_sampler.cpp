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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "synthpop/assemble/fixtures.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/geo/density_sampler.hpp"
#include "synthpop/io/grid.hpp"
#include "synthpop/io/polygon.hpp"

using namespace synthpop;

namespace {

io::RegionPolygon box(double lat0, double lon0, double lat1, double lon1) {
  return io::RegionPolygon::from_rings({io::Ring{{{lat0, lon0}, {lat0, lon1}, {lat1, lon1}, {lat1, lon0}}, false}});
}

io::GridDensity grid_of(std::vector<io::GridCell> cells, double size) {
  io::GridDensity g;
  g.cells = std::move(cells);
  g.cell_size = size;
  return g;
}

// Crossing-number test written independently of the library.
bool crossing_inside(const std::vector<LatLon>& ring, LatLon p) {
  bool in = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat) &&
        p.lon < (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon) {
      in = !in;
    }
  }
  return in;
}

}  // namespace

TEST_CASE("build keeps exactly the cells whose centers are inside") {
  const auto grid = grid_of({{{0.5, 0.5}, 1}, {{1.5, 0.5}, 2}, {{2.5, 0.5}, 3}, {{3.5, 0.5}, 4}}, 1.0);
  const auto s = geo::DensitySampler::build(grid, box(0, 0, 2, 1));
  REQUIRE(s.cells().size() == 2);
  CHECK(s.cells()[0].count == 1);
  CHECK(s.cells()[1].count == 2);
}

TEST_CASE("build rejects empty or weightless regions") {
  const auto zero = grid_of({{{0.5, 0.5}, 0}, {{1.5, 0.5}, 0}}, 1.0);
  CHECK_THROWS_AS(geo::DensitySampler::build(zero, box(0, 0, 2, 1)), PipelineError);
  const auto far = grid_of({{{10.5, 0.5}, 5}}, 1.0);
  CHECK_THROWS_AS(geo::DensitySampler::build(far, box(0, 0, 2, 1)), PipelineError);
  geo::SamplerOptions bad;
  bad.oversample_factor = 1.0;
  CHECK_THROWS_AS(geo::DensitySampler::build(far, box(0, 0, 20, 20), bad), InputError);
}

TEST_CASE("fixture district: retained cells match a brute-force center test") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path(), {.base_households = 10, .target_total = 1000, .grid_side = 10});
  const auto grid = io::load_grid(dir / "grid.csv", assemble::kFixtureCellSize);
  const auto poly = io::load_geojson(dir / "region.geojson");
  REQUIRE(grid.cells.size() == 100);
  std::size_t expected = 0;
  for (const auto& c : grid.cells) {
    bool in = false;
    for (const auto& ring : poly.rings()) in = in != crossing_inside(ring.vertices, c.center);
    expected += in;
  }
  std::size_t positive = 0;
  for (const auto& c : grid.cells) positive += c.count > 0;
  const auto s = geo::DensitySampler::build(grid, poly);
  CHECK(s.cells().size() == expected);
  CHECK(expected == 100);  // the fixture polygon covers every cell center
  CHECK(positive < 100);   // and some of them are empty
}

TEST_CASE("a single interior cell accepts every draw") {
  const auto grid = grid_of({{{0.5, 0.5}, 7}}, 1.0);
  const auto s = geo::DensitySampler::build(grid, box(-1, -1, 2, 2));
  geo::SampleStats st;
  const auto pts = s.sample_points(100, 5, &st);
  REQUIRE(pts.size() == 100);
  CHECK(st.accepted == st.drawn);
  for (const auto& p : pts) {
    CHECK(p.lat >= 0.0);
    CHECK(p.lat <= 1.0);
    CHECK(p.lon >= 0.0);
    CHECK(p.lon <= 1.0);
  }
}

TEST_CASE("cells are drawn in proportion to their counts") {
  const auto grid = grid_of({{{0.5, 0.5}, 1}, {{1.5, 0.5}, 3}}, 1.0);
  const auto s = geo::DensitySampler::build(grid, box(-1, -1, 3, 3));
  Rng rng(17);
  std::vector<std::size_t> cells;
  const auto pts = s.sample_points(40000, rng, nullptr, &cells);
  REQUIRE(pts.size() == 40000);
  std::size_t first = 0;
  for (auto c : cells) first += c == 0;
  CHECK(std::fabs(static_cast<double>(first) - 10000) / 10000 <= 0.02);
  CHECK(std::fabs(static_cast<double>(40000 - first) - 30000) / 30000 <= 0.02);
}

TEST_CASE("partially covered cell: acceptance tracks the covered area") {
  // Cell [0,1]^2; region is the part below the diagonal lat = 0.8 lon + 0.3.
  const std::vector<LatLon> region{{-1, -1}, {-1, 2}, {0.3 + 0.8 * 2, 2}, {0.3 + 0.8 * -1, -1}};
  const auto poly = io::RegionPolygon::from_rings({io::Ring{region, false}});
  const auto s = geo::DensitySampler::build(grid_of({{{0.5, 0.5}, 1}}, 1.0), poly);

  std::mt19937_64 mc(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t hits = 0;
  for (int i = 0; i < 100000; ++i) hits += crossing_inside(region, {unit(mc), unit(mc)});
  const double covered = static_cast<double>(hits) / 100000.0;

  geo::SampleStats st;
  const auto pts = s.sample_points(20000, 8, &st);
  for (const auto& p : pts) CHECK(poly.contains(p));
  const double rate = static_cast<double>(st.accepted) / static_cast<double>(st.drawn);
  CHECK(std::fabs(rate - covered) <= 0.05 * covered);
}

TEST_CASE("density fidelity: chi-square of cell counts below the 99th percentile") {
  std::vector<io::GridCell> cells;
  const double weights[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  for (int i = 0; i < 10; ++i) cells.push_back({{0.5 + i, 0.5}, weights[i]});
  const auto s = geo::DensitySampler::build(grid_of(cells, 1.0), box(-1, -1, 11, 2));
  Rng rng(123);
  std::vector<std::size_t> src;
  s.sample_points(100000, rng, nullptr, &src);
  std::vector<double> counts(10, 0.0);
  for (auto c : src) counts[c] += 1;
  double stat = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double expected = 100000.0 * weights[i] / 55.0;
    stat += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  CHECK(stat < 21.666);  // chi-square, 9 degrees of freedom, 0.99 quantile
}

TEST_CASE("accepted points stay within half a cell of their source cell") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path(), {.base_households = 10, .target_total = 1000, .grid_side = 12});
  const auto grid = io::load_grid(dir / "grid.csv", assemble::kFixtureCellSize);
  const auto poly = io::load_geojson(dir / "region.geojson");
  const auto s = geo::DensitySampler::build(grid, poly);
  Rng rng(9);
  std::vector<std::size_t> src;
  const auto pts = s.sample_points(100000, rng, nullptr, &src);
  const double half = s.cell_size() / 2;
  std::size_t outside = 0, too_far = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    outside += !poly.contains(pts[i]);
    const auto c = s.cells()[src[i]].center;
    too_far += std::fabs(pts[i].lat - c.lat) > half || std::fabs(pts[i].lon - c.lon) > half;
  }
  CHECK(outside == 0);
  CHECK(too_far == 0);
}

TEST_CASE("same seed, same points") {
  const auto grid = grid_of({{{0.5, 0.5}, 1}, {{1.5, 0.5}, 3}}, 1.0);
  const auto s = geo::DensitySampler::build(grid, box(0.2, 0.2, 1.7, 0.9));
  CHECK(s.sample_points(500, 77) == s.sample_points(500, 77));
  CHECK(s.sample_points(500, 77) != s.sample_points(500, 78));
}

TEST_CASE("a sliver region trips the acceptance floor") {
  // Retained (its center is inside) but covering a tiny fraction of the cell.
  const auto sliver = io::RegionPolygon::from_rings(
      {io::Ring{{{0.49999, 0.49999}, {0.49999, 0.50001}, {0.50001, 0.50001}, {0.50001, 0.49999}}, false}});
  const auto s = geo::DensitySampler::build(grid_of({{{0.5, 0.5}, 1}}, 1.0), sliver);
  CHECK_THROWS_AS(s.sample_points(100, 1), PipelineError);
}
