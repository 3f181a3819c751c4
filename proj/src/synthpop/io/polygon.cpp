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

#include "synthpop/io/polygon.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "synthpop/common/error.hpp"

namespace synthpop::io {

double signed_area(const std::vector<LatLon>& ring) {
  double a = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % n];
    a += p.lon * q.lat - q.lon * p.lat;
  }
  return 0.5 * a;
}

RegionPolygon RegionPolygon::from_rings(std::vector<Ring> rings) {
  if (rings.empty()) throw InputError("polygon has no rings");
  RegionPolygon poly;
  poly.min_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  poly.max_ = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  bool has_outer = false;
  for (auto& ring : rings) {
    auto& v = ring.vertices;
    if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
    // Collapse consecutive duplicates.
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
    std::vector<LatLon> distinct = v;
    std::sort(distinct.begin(), distinct.end(),
              [](const LatLon& a, const LatLon& b) { return a.lat != b.lat ? a.lat < b.lat : a.lon < b.lon; });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) throw InputError("polygon ring has fewer than 3 distinct vertices");
    const double area = signed_area(v);
    if (area == 0.0) throw InputError("polygon ring has zero area");
    if ((area < 0.0) != ring.hole) std::reverse(v.begin(), v.end());
    has_outer = has_outer || !ring.hole;
    for (const auto& p : v) {
      poly.min_.lat = std::min(poly.min_.lat, p.lat);
      poly.min_.lon = std::min(poly.min_.lon, p.lon);
      poly.max_.lat = std::max(poly.max_.lat, p.lat);
      poly.max_.lon = std::max(poly.max_.lon, p.lon);
    }
  }
  if (!has_outer) throw InputError("polygon has only holes");
  poly.rings_ = std::move(rings);
  return poly;
}

namespace {

bool on_segment(LatLon p, LatLon a, LatLon b) {
  const double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  if (cross != 0.0) return false;
  return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) && p.lat >= std::min(a.lat, b.lat) &&
         p.lat <= std::max(a.lat, b.lat);
}

}  // namespace

bool RegionPolygon::contains(LatLon p) const {
  if (p.lat < min_.lat || p.lat > max_.lat || p.lon < min_.lon || p.lon > max_.lon) return false;
  bool inside = false;
  for (const auto& ring : rings_) {
    const auto& v = ring.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const LatLon a = v[j];
      const LatLon b = v[i];
      if (on_segment(p, a, b)) return true;
      // Ray towards +lon; half-open rule on lat avoids double counting vertices.
      if ((a.lat > p.lat) != (b.lat > p.lat)) {
        const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
        if (p.lon < x) inside = !inside;
      }
    }
  }
  return inside;
}

namespace {

using nlohmann::json;

std::vector<LatLon> read_ring(const json& coords) {
  if (!coords.is_array()) throw InputError("GeoJSON ring is not an array");
  std::vector<LatLon> ring;
  for (const auto& pt : coords) {
    if (!pt.is_array() || pt.size() < 2 || !pt[0].is_number() || !pt[1].is_number()) {
      throw InputError("GeoJSON position must be [lon, lat]");
    }
    ring.push_back({pt[1].get<double>(), pt[0].get<double>()});
  }
  if (ring.size() < 4) throw InputError("GeoJSON ring needs at least 4 positions");
  if (!(ring.front() == ring.back())) throw InputError("GeoJSON ring is not closed");
  return ring;
}

void read_polygon(const json& coords, std::vector<Ring>& out) {
  if (!coords.is_array() || coords.empty()) throw InputError("GeoJSON Polygon has no rings");
  bool first = true;
  for (const auto& r : coords) {
    out.push_back(Ring{read_ring(r), !first});
    first = false;
  }
}

void read_geometry(const json& g, std::vector<Ring>& out) {
  if (!g.is_object() || !g.contains("type")) throw InputError("GeoJSON object without type");
  const auto type = g.at("type").get<std::string>();
  if (type == "Polygon") {
    read_polygon(g.at("coordinates"), out);
  } else if (type == "MultiPolygon") {
    for (const auto& p : g.at("coordinates")) read_polygon(p, out);
  } else if (type == "Feature") {
    if (g.contains("geometry") && !g.at("geometry").is_null()) read_geometry(g.at("geometry"), out);
  } else if (type == "FeatureCollection") {
    for (const auto& f : g.at("features")) read_geometry(f, out);
  } else if (type == "GeometryCollection") {
    for (const auto& sub : g.at("geometries")) read_geometry(sub, out);
  } else {
    throw InputError("unsupported GeoJSON type '" + type + "' (expected Polygon or MultiPolygon)");
  }
}

}  // namespace

RegionPolygon parse_geojson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid GeoJSON: ") + e.what());
  }
  std::vector<Ring> rings;
  try {
    read_geometry(doc, rings);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid GeoJSON: ") + e.what());
  }
  if (rings.empty()) throw InputError("GeoJSON contains no polygon");
  return RegionPolygon::from_rings(std::move(rings));
}

RegionPolygon load_geojson(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_geojson(ss.str());
  } catch (const InputError& e) {
    throw InputError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace synthpop::io
