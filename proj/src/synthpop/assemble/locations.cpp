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

#include "synthpop/assemble/locations.hpp"

#include <string>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::assemble {

namespace {

constexpr std::uint64_t kPersonBlock = 100'000'000ULL;
constexpr std::uint64_t kLocationBlock = 1'000'000'000ULL;

void check_region(std::uint64_t region_code) {
  if (region_code < 1 || region_code > kMaxRegionCode) {
    throw InputError("region_code must be between 1 and " + std::to_string(kMaxRegionCode));
  }
}

void check_seq(std::uint64_t seq, std::uint64_t block) {
  if (seq >= block) throw PipelineError("id sequence " + std::to_string(seq) + " overflows the id layout");
}

}  // namespace

std::uint64_t household_id(std::uint64_t region_code, std::uint64_t seq) {
  check_region(region_code);
  check_seq(seq, kPersonBlock);
  return region_code * kPersonBlock + seq;
}

std::uint64_t agent_id(std::uint64_t region_code, std::uint64_t seq) { return household_id(region_code, seq); }

std::uint64_t workplace_id(std::uint64_t region_code, std::uint64_t seq) {
  check_region(region_code);
  check_seq(seq, kLocationBlock);
  return 2'000'000'000'000ULL + region_code * kLocationBlock + seq;
}

std::uint64_t public_place_id(std::uint64_t region_code, std::uint64_t seq) {
  check_region(region_code);
  check_seq(seq, kLocationBlock);
  return 3'000'000'000'000ULL + region_code * kLocationBlock + seq;
}

LocationTables generate_locations(const LocationCounts& counts, const geo::DensitySampler& sampler,
                                  const attr::JobTable& jobs, bool students_exist, std::uint64_t seed) {
  if (counts.workplaces < 1) throw InputError("n_workplaces must be >= 1");
  if (counts.public_places < 1) throw InputError("n_public_places must be >= 1");
  check_region(counts.region_code);
  if (students_exist) {
    const auto* teacher = jobs.find(attr::kTeacherLabel);
    if (!teacher || !(teacher->weight > 0.0)) {
      throw PipelineError("students exist but the job table has no 'Teacher' entry, so no schools can be created");
    }
  }

  LocationTables out;
  Rng type_rng = make_rng(seed, Stream::kWorkplaceTypes);
  Rng wp_rng = make_rng(seed, Stream::kWorkplaces);
  const auto wp_points = sampler.sample_points(counts.workplaces, wp_rng);
  out.workplaces.reserve(counts.workplaces);
  for (std::size_t i = 0; i < counts.workplaces; ++i) {
    loc::ExternalLocation e;
    e.id = workplace_id(counts.region_code, i + 1);
    e.kind = loc::LocationKind::kWorkplace;
    e.workplace_type = jobs.draw_workplace_type(type_rng).label;
    e.position = wp_points[i];
    if (e.workplace_type == attr::kTeacherLabel) {
      auto school = e;
      school.kind = loc::LocationKind::kSchool;
      out.schools.push_back(std::move(school));
    }
    out.workplaces.push_back(std::move(e));
  }
  if (students_exist && out.schools.empty()) {
    throw PipelineError("no workplace of type 'Teacher' was drawn, so students have no school; raise n_workplaces");
  }

  Rng pp_rng = make_rng(seed, Stream::kPublicPlaces);
  const auto pp_points = sampler.sample_points(counts.public_places, pp_rng);
  out.public_places.reserve(counts.public_places);
  for (std::size_t i = 0; i < counts.public_places; ++i) {
    loc::ExternalLocation e;
    e.id = public_place_id(counts.region_code, i + 1);
    e.kind = loc::LocationKind::kPublicPlace;
    e.position = pp_points[i];
    out.public_places.push_back(std::move(e));
  }
  return out;
}

void write_locations(const LocationTables& tables, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.write_row({"location_id", "kind", "workplace_type", "is_school", "lat", "lon"});
  std::string line;
  auto emit = [&](const loc::ExternalLocation& e, bool is_school) {
    line.clear();
    append_int(line, e.id);
    line += ',';
    append_csv_field(line, loc::location_kind_name(e.kind));
    line += ',';
    append_csv_field(line, e.workplace_type);
    line += is_school ? ",1," : ",0,";
    append_double(line, e.position.lat);
    line += ',';
    append_double(line, e.position.lon);
    out.write_line(line);
  };
  for (const auto& e : tables.workplaces) emit(e, e.workplace_type == attr::kTeacherLabel);
  for (const auto& e : tables.public_places) emit(e, false);
  out.close();
}

std::vector<AdminUnit> load_admin_units(const std::filesystem::path& path) {
  CsvReader in(path);
  const auto c_name = in.require_column("name");
  const auto c_lat = in.require_column("lat");
  const auto c_lon = in.require_column("lon");
  std::vector<AdminUnit> units;
  while (in.next()) {
    AdminUnit u;
    u.name = std::string(trim(in[c_name]));
    if (u.name.empty()) in.fail(c_name, "empty admin unit name");
    const auto lat = parse_double(in[c_lat]);
    const auto lon = parse_double(in[c_lon]);
    if (!lat || !std::isfinite(*lat)) in.fail(c_lat, "not a number");
    if (!lon || !std::isfinite(*lon)) in.fail(c_lon, "not a number");
    u.center = {*lat, *lon};
    units.push_back(std::move(u));
  }
  if (units.empty()) throw InputError(path.string() + ": no admin units");
  return units;
}

std::size_t nearest_admin_unit(LatLon p, std::span<const AdminUnit> units) {
  if (units.empty()) throw InputError("admin unit list is empty");
  std::size_t best = 0;
  double best_d = loc::l2_distance(p, units[0].center);
  for (std::size_t i = 1; i < units.size(); ++i) {
    const double d = loc::l2_distance(p, units[i].center);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

void attach_admin_units(std::span<io::PersonRecord> persons, std::span<const AdminUnit> units) {
  if (units.empty()) throw InputError("admin unit list is empty");
  std::size_t i = 0;
  while (i < persons.size()) {
    const auto hh = persons[i].hhid;
    const auto& unit = units[nearest_admin_unit(persons[i].home, units)];
    for (; i < persons.size() && persons[i].hhid == hh; ++i) {
      persons[i].admin_unit = unit.name;
      persons[i].admin_unit_center = unit.center;
    }
  }
}

}  // namespace synthpop::assemble
