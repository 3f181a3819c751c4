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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synthpop::io {

inline constexpr std::size_t kComorbidityCount = 10;

// Column names of the comorbidity flags, in output order.
inline constexpr std::array<std::string_view, kComorbidityCount> kComorbidityColumns = {
    "M_Fever",  "M_Diarrhea", "M_Cataract", "M_Heart_disease", "M_Diabetes",
    "M_Leprosy", "M_Cancer",  "M_Asthma",   "M_Paralysis",     "M_Epilepsy"};

using Comorbidities = std::array<bool, kComorbidityCount>;

struct MicroPerson {
  std::string person_id;
  std::string household_id;
  int age = 0;
  std::string sex;
  std::string religion;
  std::string caste;
  std::optional<double> height;  // cm
  std::optional<double> weight;  // kg
  std::optional<std::string> job_label;
  std::optional<int> job_id;
  Comorbidities comorbidities{};
};

struct MicroHousehold {
  std::string household_id;
  std::string psu_id;
  std::optional<std::string> religion;
  std::optional<std::string> caste;
  std::vector<std::size_t> members;  // indices into MicroSample::persons, file order

  std::size_t size() const { return members.size(); }
};

struct MicroSample {
  std::vector<MicroPerson> persons;
  std::vector<MicroHousehold> households;
  std::vector<std::string> warnings;
};

// Maps semantic fields to column headers. Defaults follow the output schema,
// so a generated population can be read back with the same mapping.
struct MicroSchema {
  std::string person_id = "Agent_ID";
  std::string household_id = "HHID";
  std::string age = "Age";
  std::string sex = "SexLabel";
  std::string religion = "Religion";
  std::string caste = "Caste";
  std::string height = "Height";
  std::string weight = "Weight";
  std::string job_label = "JobLabel";
  std::string job_id = "JobID";
  std::string psu_id = "PSUID";
  std::string household_size = "HouseholdSize";

  int max_age = 120;
  double max_height = 250.0;
  double max_weight = 300.0;
};

// Reads the individuals and households files. Either the whole sample loads
// or an InputError is thrown; a partially built sample is never returned.
MicroSample load_microdata(const std::filesystem::path& individuals, const std::filesystem::path& households,
                           const MicroSchema& schema = {});

}  // namespace synthpop::io
