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
#include <string_view>
#include <vector>

#include "synthpop/io/geometry.hpp"

namespace synthpop::io {

struct Ring {
  std::vector<LatLon> vertices;  // open: the closing vertex is not repeated
  bool hole = false;
};

// Region boundary: one or more outer rings with optional holes. After
// construction outer rings run counter-clockwise and holes clockwise in the
// (lon, lat) plane.
class RegionPolygon {
 public:
  RegionPolygon() = default;

  // Rings may be given open or closed. Throws InputError for rings with fewer
  // than three distinct vertices or zero area.
  static RegionPolygon from_rings(std::vector<Ring> rings);

  const std::vector<Ring>& rings() const { return rings_; }
  bool empty() const { return rings_.empty(); }

  // Even-odd rule over all rings, so points inside a hole are outside.
  // Points exactly on an edge or vertex count as inside.
  bool contains(LatLon p) const;

  LatLon min_corner() const { return min_; }
  LatLon max_corner() const { return max_; }

 private:
  std::vector<Ring> rings_;
  LatLon min_{}, max_{};
};

inline bool point_in_polygon(LatLon p, const RegionPolygon& poly) { return poly.contains(p); }

// GeoJSON Polygon or MultiPolygon, bare or wrapped in a Feature or
// FeatureCollection (all polygonal features are merged). Coordinates are
// [lon, lat] per RFC 7946 and each ring must be closed.
RegionPolygon parse_geojson(std::string_view text);
RegionPolygon load_geojson(const std::filesystem::path& path);

// Signed area in the (lon, lat) plane; positive for counter-clockwise.
double signed_area(const std::vector<LatLon>& ring);

}  // namespace synthpop::io
