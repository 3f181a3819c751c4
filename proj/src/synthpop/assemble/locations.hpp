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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "synthpop/attr/job_table.hpp"
#include "synthpop/geo/density_sampler.hpp"
#include "synthpop/io/population.hpp"
#include "synthpop/loc/assign.hpp"

namespace synthpop::assemble {

// Numeric id layout (uniqueness within a column is the only contract):
//   HHID            = region_code * 1e8 + household sequence number
//   Agent_ID        = region_code * 1e8 + person sequence number
//   WorkPlaceID     = 2e12 + region_code * 1e9 + workplace sequence number
//   public_place_id = 3e12 + region_code * 1e9 + public place sequence number
// Schools are workplaces and keep their workplace id.
inline constexpr std::uint64_t kMaxRegionCode = 999;
std::uint64_t household_id(std::uint64_t region_code, std::uint64_t seq);
std::uint64_t agent_id(std::uint64_t region_code, std::uint64_t seq);
std::uint64_t workplace_id(std::uint64_t region_code, std::uint64_t seq);
std::uint64_t public_place_id(std::uint64_t region_code, std::uint64_t seq);

struct LocationTables {
  std::vector<loc::ExternalLocation> workplaces;
  std::vector<loc::ExternalLocation> schools;  // workplaces of type Teacher
  std::vector<loc::ExternalLocation> public_places;
};

struct LocationCounts {
  std::size_t workplaces = 0;
  std::size_t public_places = 0;
  std::uint64_t region_code = 1;
};

// Workplace types are drawn with replacement in proportion to the job table
// weights (Homebound and Student excluded); coordinates come from the density
// sampler. Throws PipelineError when students exist but the table has no
// Teacher entry with positive weight.
LocationTables generate_locations(const LocationCounts& counts, const geo::DensitySampler& sampler,
                                  const attr::JobTable& jobs, bool students_exist, std::uint64_t seed);

// location_id,kind,workplace_type,is_school,lat,lon
void write_locations(const LocationTables& tables, const std::filesystem::path& path);

struct AdminUnit {
  std::string name;
  LatLon center;
};

// Columns name, lat, lon.
std::vector<AdminUnit> load_admin_units(const std::filesystem::path& path);

// Nearest center by L2 distance; the lowest index wins ties.
std::size_t nearest_admin_unit(LatLon p, std::span<const AdminUnit> units);

// Maps each household to its nearest unit; every member gets the unit of the
// household's home. Throws InputError on an empty unit list.
void attach_admin_units(std::span<io::PersonRecord> persons, std::span<const AdminUnit> units);

}  // namespace synthpop::assemble
