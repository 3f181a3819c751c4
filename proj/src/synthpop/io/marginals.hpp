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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synthpop::io {

// Attribute names with a meaning to the loader and the incidence builder.
inline constexpr std::string_view kAgeGroupAttribute = "age_group";
inline constexpr std::string_view kSexAttribute = "sex";
inline constexpr std::string_view kReligionAttribute = "religion";
inline constexpr std::string_view kCasteAttribute = "caste";
inline constexpr std::string_view kHouseholdSizeAttribute = "household_size";

enum class AttributeLevel { kPerson, kHousehold };

struct MarginalTable {
  std::string attribute;
  AttributeLevel level = AttributeLevel::kPerson;
  std::vector<std::pair<std::string, double>> categories;  // file order

  double total() const;
};

struct MarginalSet {
  std::string region_id;
  std::vector<MarginalTable> tables;
  std::vector<std::string> warnings;

  const MarginalTable* find(std::string_view attribute) const;
  // Mean of the person-level table totals (they agree to 0.5% after loading).
  double person_total() const;
};

AttributeLevel attribute_level(std::string_view attribute);

// Reads `region,attribute,category,count` rows. The region column is
// optional; when present only rows for region_id are kept.
MarginalSet load_marginals(const std::filesystem::path& path, std::string_view region_id);

// Cross-table checks shared by the loader and in-memory construction.
void validate_marginals(MarginalSet& set);

}  // namespace synthpop::io
